"""Dense state-vector simulation.

The state is a numpy array with one axis of length 2 per live qubit, in
allocation order.  An optional leading batch axis carries many states
through the circuit at once; :func:`~quill.simulators.circuit_unitary`
uses it to push every basis state through in a single pass.
"""

from __future__ import annotations

import cmath
import math

import numpy as np

from ..circuit import RGate
from ..errors import AssertionFailed, TooManyQubits

TERM_TOLERANCE = 1e-9

_R2 = 1 / math.sqrt(2)
_MATRICES = {
    "H": ((_R2, _R2), (_R2, -_R2)),
    "Y": ((0, -1j), (1j, 0)),
}
_PHASES = {"Z": -1.0 + 0j, "S": 1j, "T": cmath.exp(1j * math.pi / 4)}


def phase_of(m: int, inverted: bool) -> complex:
    p = cmath.exp(2j * math.pi / 2**m)
    return p.conjugate() if inverted else p


class VectorBackend:
    def __init__(self, rng=None, *, limit: int = 20, batch: int | None = None):
        self.rng = rng
        self.limit = limit
        self.offset = 0 if batch is None else 1
        self.state = np.ones((batch,) if batch else (), dtype=complex)
        self.axes: list[int] = []  # runtime wire id per qubit axis

    # lifecycle ------------------------------------------------------------

    def init_q(self, w: int, value: bool) -> None:
        if len(self.axes) >= self.limit:
            raise TooManyQubits(f"more than {self.limit} live qubits")
        new = np.zeros(self.state.shape + (2,), dtype=complex)
        new[..., int(bool(value))] = self.state
        self.state = new
        self.axes.append(w)

    def load(self, wires, amplitudes) -> None:
        """Replace an empty register by ``amplitudes`` over ``wires``
        (first wire most significant)."""
        if len(wires) > self.limit:
            raise TooManyQubits(f"more than {self.limit} live qubits")
        amps = np.asarray(amplitudes, dtype=complex)
        lead = self.state.shape[: self.offset]
        if self.offset:
            amps = amps.reshape(lead + (-1,))
        else:
            amps = self.state[..., None] * amps.reshape(-1)
        self.state = amps.reshape(lead + (2,) * len(wires))
        self.axes.extend(wires)

    def _axis(self, w: int) -> int:
        return self.axes.index(w) + self.offset

    def _drop(self, w: int, value: int, *, check: bool) -> None:
        ax = self._axis(w)
        keep = np.take(self.state, value, axis=ax)
        if check:
            lost = np.take(self.state, 1 - value, axis=ax)
            mass = float(np.vdot(lost, lost).real)
            if mass > TERM_TOLERANCE:
                raise AssertionFailed(
                    f"qubit terminated asserting {value} has weight {mass:.3g} on {1 - value}"
                )
        self.state = np.ascontiguousarray(keep)
        self.axes.remove(w)

    def term_q(self, w: int, value: bool) -> None:
        self._drop(w, int(bool(value)), check=True)

    def measure(self, w: int) -> bool:
        ax = self._axis(w)
        one = np.take(self.state, 1, axis=ax)
        p1 = float(np.vdot(one, one).real)
        outcome = self.rng.random() < p1
        self._drop(w, int(outcome), check=False)
        norm = math.sqrt(p1 if outcome else 1.0 - p1)
        if norm > 0:
            self.state /= norm
        return outcome

    # gates ----------------------------------------------------------------

    def unitary(self, g, target: int, controls) -> None:
        state = self.state
        idx = [slice(None)] * state.ndim
        for w, positive in controls:
            idx[self._axis(w)] = int(positive)
        t = self._axis(target)
        kind = g.kind
        if type(kind) is RGate:
            idx[t] = 1
            state[tuple(idx)] *= phase_of(kind.m, g.inverted)
            return
        name = kind.name
        if name in _PHASES:
            p = _PHASES[name]
            idx[t] = 1
            state[tuple(idx)] *= p.conjugate() if g.inverted else p
            return
        i0 = list(idx)
        i0[t] = 0
        idx[t] = 1
        # the trailing Ellipsis keeps 0-d results as views
        i0, i1 = (*i0, ...), (*idx, ...)
        a = state[i0]
        b = state[i1]
        if name == "X":
            tmp = a.copy()
            a[...] = b
            b[...] = tmp
            return
        # H and Y are Hermitian, so ``inverted`` changes nothing
        (u00, u01), (u10, u11) = _MATRICES[name]
        na = u00 * a + u01 * b
        b[...] = u10 * a + u11 * b
        a[...] = na

    # results --------------------------------------------------------------

    def amplitudes(self, wires) -> np.ndarray:
        """The state with qubit axes ordered as ``wires`` (first most
        significant), flattened; with a batch axis the result is 2-D."""
        order = list(range(self.offset)) + [self._axis(w) for w in wires]
        out = np.transpose(self.state, order)
        lead = self.state.shape[: self.offset]
        return out.reshape(lead + (2 ** len(wires),))

