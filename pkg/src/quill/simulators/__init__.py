"""Classical, stabilizer and state-vector simulation of circuits.

The ``sim_*`` functions take a :class:`~quill.circuit.Circuit` and one
boolean per input wire (any nesting is flattened depth-first) and return a
tuple with one boolean per output wire.  Quantum outputs are measured at
the end.  The ``run_*_generic`` functions take a circuit-producing function
and boolean shape data instead, and return boolean shape data shaped like
the function's result.

Random choices come from :class:`Rng`; pass a seed or an ``Rng`` instance.
"""

from __future__ import annotations

from collections.abc import Callable, Sequence
from dataclasses import dataclass, field

import numpy as np

from ..builder import extract_with_shape, output_values
from ..circuit import C, Circuit, Q
from ..errors import SimulationError, TooManyQubits
from ..shapes import leaves, map_leaves
from ..wires import Qubit
from .classical import ClassicalBackend
from .engine import Machine
from .rng import Rng
from .stabilizer import StabilizerBackend, Tableau
from .vector import VectorBackend

VECTOR_LIMIT = 20
UNITARY_LIMIT = 10


def _rng(rng) -> Rng:
    if rng is None:
        return Rng(0)
    if isinstance(rng, int):
        return Rng(rng)
    return rng


def _execute(c: Circuit, backend, values) -> tuple[Machine, dict[int, int]]:
    machine = Machine(backend, c.subroutines)
    env = machine.start(c, leaves(values))
    machine.run(c, env)
    return machine, env


def _read_outputs(c: Circuit, machine: Machine, env, read_qubit) -> tuple[bool, ...]:
    out = []
    for w, k in c.outputs:
        rt = env[w]
        out.append(machine.bits[rt] if k is C else bool(read_qubit(rt)))
    return tuple(out)


def sim_classical(c: Circuit, inputs=()) -> tuple[bool, ...]:
    """Evaluate a circuit made of X gates (with any controls), initializations,
    terminations and measurements on boolean inputs."""
    backend = ClassicalBackend()
    machine, env = _execute(c, backend, inputs)
    return _read_outputs(c, machine, env, backend.value)


def sim_stabilizer(c: Circuit, inputs=(), rng=None) -> tuple[bool, ...]:
    """Simulate a Clifford circuit; quantum outputs are measured."""
    backend = StabilizerBackend(_rng(rng))
    machine, env = _execute(c, backend, inputs)
    return _read_outputs(c, machine, env, backend.measure)


def sim_vector(c: Circuit, inputs=(), rng=None, *, limit: int = VECTOR_LIMIT) -> tuple[bool, ...]:
    """Simulate any circuit on a state vector; quantum outputs are measured."""
    backend = VectorBackend(_rng(rng), limit=limit)
    machine, env = _execute(c, backend, inputs)
    return _read_outputs(c, machine, env, backend.measure)


@dataclass
class StateVector:
    """Final state of a run.

    ``amplitudes[k]`` belongs to the basis state whose bits, most
    significant first, are the values of ``wires`` (the quantum outputs in
    output order).  ``bits`` holds the values of classical outputs.
    """

    amplitudes: np.ndarray
    wires: tuple[int, ...]
    bits: dict[int, bool] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.amplitudes)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def fidelity(self, other) -> float:
        """|<self|other>| for another StateVector or amplitude array."""
        amps = other.amplitudes if isinstance(other, StateVector) else np.asarray(other)
        return float(abs(np.vdot(self.amplitudes, amps)))


def sim_vector_state(c: Circuit, inputs=(), rng=None, *, limit: int = VECTOR_LIMIT) -> StateVector:
    """Run ``c`` and return the state of its quantum outputs.

    ``inputs`` is either one boolean per input wire or, for circuits whose
    inputs are all quantum, an array of ``2**n`` amplitudes (first input wire
    most significant).  Measurements inside the circuit collapse the state
    using ``rng``.
    """
    backend = VectorBackend(_rng(rng), limit=limit)
    machine = Machine(backend, c.subroutines)
    if isinstance(inputs, np.ndarray):
        if any(k is not Q for _, k in c.inputs):
            raise SimulationError("an amplitude vector needs a circuit with only quantum inputs")
        n = len(c.inputs)
        if inputs.shape != (2**n,):
            raise SimulationError(f"expected {2**n} amplitudes, got shape {inputs.shape}")
        env = machine.start(c, [False] * n, init_q=False)
        backend.load([env[w] for w, _ in c.inputs], inputs)
    else:
        env = machine.start(c, leaves(inputs))
    machine.run(c, env)
    qwires = tuple(w for w, k in c.outputs if k is Q)
    amps = backend.amplitudes([env[w] for w in qwires])
    bits = {w: machine.bits[env[w]] for w, k in c.outputs if k is C}
    return StateVector(amps, qwires, bits)


def circuit_unitary(c: Circuit, *, limit: int = UNITARY_LIMIT) -> np.ndarray:
    """Matrix of a measurement-free circuit with only quantum inputs and
    outputs; column ``j`` is the image of basis state ``j``.  Ancillas are
    allowed as long as every termination assertion holds on every input."""
    if any(k is not Q for _, k in c.inputs + c.outputs):
        raise SimulationError("circuit_unitary needs quantum inputs and outputs only")
    n = len(c.inputs)
    if n > limit:
        raise TooManyQubits(f"{n} inputs exceed the unitary limit of {limit}")
    dim = 2**n
    backend = VectorBackend(None, limit=max(VECTOR_LIMIT - n, n), batch=dim)
    machine = Machine(backend, c.subroutines)
    env = machine.start(c, [False] * n, init_q=False)
    backend.load([env[w] for w, _ in c.inputs], np.eye(dim, dtype=complex))
    machine.run(c, env)
    rows = backend.amplitudes([env[w] for w, _ in c.outputs])
    return rows.T.copy()


# ------------------------------------------------------------ generic runners


def _bool_template(x):
    return map_leaves(lambda leaf: Qubit if isinstance(leaf, (bool, np.bool_)) else leaf, x)


def _generic(simulate: Callable, program: Callable, inputs: Sequence, **kwargs):
    templates = [_bool_template(x) for x in inputs]
    circuit, out_template = extract_with_shape(program, *templates)
    values = [bool(v) for x in inputs for v in leaves(x) if isinstance(v, (bool, np.bool_))]
    outs = simulate(circuit, values, **kwargs)
    returned = sum(1 for leaf in leaves(out_template) if leaf is not None and isinstance(leaf, type))
    return output_values(out_template, outs[:returned])


def run_classical_generic(program: Callable, *inputs):
    """Build ``program`` on qubits shaped like the boolean ``inputs`` and
    evaluate it classically; returns booleans shaped like its result."""
    return _generic(sim_classical, program, inputs)


def run_stabilizer_generic(program: Callable, *inputs, rng=None):
    return _generic(sim_stabilizer, program, inputs, rng=rng)


def run_generic(program: Callable, *inputs, rng=None):
    """State-vector counterpart of :func:`run_classical_generic`."""
    return _generic(sim_vector, program, inputs, rng=rng)


__all__ = [
    "Rng",
    "StateVector",
    "Tableau",
    "circuit_unitary",
    "run_classical_generic",
    "run_generic",
    "run_stabilizer_generic",
    "sim_classical",
    "sim_stabilizer",
    "sim_vector",
    "sim_vector_state",
]
