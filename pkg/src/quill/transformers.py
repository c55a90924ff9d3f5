"""Gate-by-gate circuit rewriting and the standard decomposition passes.

A rule is a callable ``rule(gate, env)`` returning the gates that replace
``gate``.  ``env.fresh()`` hands out unused wire ids for scoped ancillas and
``env.kind(wire)`` reports whether a wire is quantum or classical.  Rules
can be applied to a finished :class:`~quill.circuit.Circuit` with
:func:`transform`, or on the fly while a circuit is being generated with
:func:`decompose_generic` / the ``transformers=`` argument of
:func:`~quill.builder.extract`.
"""

from __future__ import annotations

import itertools
from collections.abc import Callable, Iterable, Iterator

from .circuit import (
    C,
    Circuit,
    Comment,
    Control,
    Gate,
    Named,
    Q,
    QInit,
    RGate,
    WireKind,
    WireState,
    reverse_gates,
)
from .errors import UnsupportedGate

BINARY = "binary"
TOFFOLI = "toffoli"

_X, _H, _S, _T, _Y, _Z = (Named(n) for n in "XHSTYZ")


def identity(gate: Gate, env) -> Iterable[Gate]:
    return (gate,)


def drop_comments(gate: Gate, env) -> Iterable[Gate]:
    return () if isinstance(gate.kind, Comment) else (gate,)


class _Env:
    def __init__(self, state: WireState, start: int):
        self.state = state
        self._ids = itertools.count(start)

    def fresh(self) -> int:
        return next(self._ids)

    def kind(self, wire: int) -> WireKind:
        return self.state.live.get(wire, Q)


def transform_gates(rule: Callable, circuit: Circuit) -> Iterator[Gate]:
    """Lazily rewrite the main body of ``circuit``, one input gate at a time."""
    state = WireState(circuit.inputs, circuit.subroutines)
    env = _Env(state, circuit.max_wire() + 1)
    for g in circuit.gates:
        yield from rule(g, env)
        state.apply(g)


def transform(rule: Callable, circuit: Circuit) -> Circuit:
    """Apply ``rule`` to every gate, including those of every subroutine body
    (each transformed once).  Call gates themselves are left to the rule."""
    subs = {}
    for name, body in circuit.subroutines.items():
        scoped = Circuit(body.inputs, body.gates, body.outputs, circuit.subroutines)
        subs[name] = Circuit(body.inputs, tuple(transform_gates(rule, scoped)), body.outputs)
    return Circuit(circuit.inputs, tuple(transform_gates(rule, circuit)), circuit.outputs, subs)


# ------------------------------------------------------------ decomposition


def _g(kind, target, controls=(), inverted=False) -> Gate:
    return Gate(kind, (target,), tuple(controls), inverted)


def _cnot(c: int, t: int) -> Gate:
    return Gate(_X, (t,), (Control(c),))


def _phase_index(g: Gate) -> tuple[int, bool] | None:
    """(m, inverted) when ``g`` is the phase gate diag(1, exp(+-2*pi*i/2**m))."""
    k = g.kind
    if isinstance(k, RGate):
        return k.m, g.inverted
    if isinstance(k, Named) and k.name in ("Z", "S", "T"):
        return {"Z": 1, "S": 2, "T": 3}[k.name], g.inverted and k.name != "Z"
    return None


def _single_controlled(g: Gate, c: int) -> list[Gate]:
    """Controlled-U on one positive quantum control, as CNOTs and one-qubit gates."""
    t = g.operands[0]
    name = g.kind.name if isinstance(g.kind, Named) else None
    if name == "X":
        return [_cnot(c, t)]
    if name == "Z":
        return [_g(_H, t), _cnot(c, t), _g(_H, t)]
    if name == "Y":
        return [_g(_S, t, inverted=True), _cnot(c, t), _g(_S, t)]
    if name == "H":
        return [
            _g(_S, t),
            _g(_H, t),
            _g(_T, t),
            _cnot(c, t),
            _g(_T, t, inverted=True),
            _g(_H, t),
            _g(_S, t, inverted=True),
        ]
    phase = _phase_index(g)
    if phase is None:
        raise UnsupportedGate(f"no controlled decomposition for {g.kind!r}")
    m, inv = phase
    half = RGate(m + 1)
    return [
        _g(half, c, inverted=inv),
        _g(half, t, inverted=inv),
        _cnot(c, t),
        _g(half, t, inverted=not inv),
        _cnot(c, t),
    ]


def _toffoli_network(a: int, b: int, t: int) -> list[Gate]:
    """The standard 15-gate Clifford+T circuit for a doubly controlled X."""
    return [
        _g(_H, t),
        _cnot(b, t),
        _g(_T, t, inverted=True),
        _cnot(a, t),
        _g(_T, t),
        _cnot(b, t),
        _g(_T, t, inverted=True),
        _cnot(a, t),
        _g(_T, b),
        _g(_T, t),
        _g(_H, t),
        _cnot(a, b),
        _g(_T, a),
        _g(_T, b, inverted=True),
        _cnot(a, b),
    ]


class Decomposer:
    """Rewrite rule expanding controlled gates into a small gate base.

    ``binary``: every output gate touches at most two quantum wires.
    ``toffoli``: as ``binary``, but an X with exactly two positive quantum
    controls is kept.  Classical controls are carried over to every unitary
    gate of an expansion and do not count towards the bound.
    """

    def __init__(self, gateset: str = BINARY):
        if gateset not in (BINARY, TOFFOLI):
            raise ValueError(f"unknown gate set {gateset!r}")
        self.gateset = gateset

    def __call__(self, gate: Gate, env) -> list[Gate]:
        kind = gate.kind
        if not isinstance(kind, (Named, RGate)):
            if type(kind).__module__ != Gate.__module__:
                raise UnsupportedGate(f"no rule for gate kind {kind!r}")
            return [gate]
        classical = tuple(c for c in gate.controls if env.kind(c.wire) is C)
        quantum = [c for c in gate.controls if env.kind(c.wire) is not C]
        core = Gate(kind, gate.operands, (), gate.inverted)
        out = self._expand(core, quantum, env)
        if not classical:
            return out
        return [
            Gate(g.kind, g.operands, g.controls + classical, g.inverted)
            if isinstance(g.kind, (Named, RGate))
            else g
            for g in out
        ]

    def _expand(self, g: Gate, controls: list[Control], env) -> list[Gate]:
        negative = [c.wire for c in controls if not c.positive]
        if negative:
            flips = [_g(_X, w) for w in negative]
            positive = [Control(c.wire) for c in controls]
            return flips + self._expand(g, positive, env) + flips
        wires = [c.wire for c in controls]
        k = len(wires)
        if k == 0:
            return [g]
        if k == 1:
            return _single_controlled(g, wires[0])
        is_x = isinstance(g.kind, Named) and g.kind.name == "X"
        if k == 2 and is_x:
            if self.gateset == TOFFOLI:
                return [Gate(_X, g.operands, (Control(wires[0]), Control(wires[1])))]
            return _toffoli_network(wires[0], wires[1], g.operands[0])
        # Fold the controls into a ladder of ancillas, one Toffoli per step.
        compute: list[Gate] = []
        acc = wires[0]
        for w in wires[1:]:
            a = env.fresh()
            compute.append(Gate(QInit(False), (a,)))
            compute.extend(self._expand(_g(_X, a), [Control(acc), Control(w)], env))
            acc = a
        return compute + _single_controlled(g, acc) + reverse_gates(compute)


def decompose(c: Circuit, gateset: str = BINARY) -> Circuit:
    return transform(Decomposer(gateset), c)


def decompose_binary(c: Circuit) -> Circuit:
    return decompose(c, BINARY)


def decompose_toffoli(c: Circuit) -> Circuit:
    return decompose(c, TOFFOLI)


def decompose_generic(gateset: str, program: Callable) -> Callable:
    """Wrap a circuit function so that its gates are decomposed as they are
    generated."""
    rule = Decomposer(gateset)

    def decomposed(ctx, *args):
        rules = ctx._shared.rules
        rules.append(rule)
        try:
            return program(ctx, *args)
        finally:
            rules.remove(rule)

    decomposed.__name__ = f"{getattr(program, '__name__', 'program')}_{gateset}"
    return decomposed


def quantum_arity(gate: Gate, kinds) -> int:
    """Number of quantum wires a gate touches (``kinds`` maps wire -> kind)."""
    return sum(1 for w in gate.wires if kinds.get(w, Q) is Q)


def max_quantum_arity(c: Circuit) -> int:
    """Largest :func:`quantum_arity` over the unitary gates of ``c`` and its
    subroutines; comments, lifecycle gates and calls are not counted."""
    top = 0
    bodies = [Circuit(b.inputs, b.gates, b.outputs, c.subroutines) for b in c.subroutines.values()] + [c]
    for body in bodies:
        state = WireState(body.inputs, c.subroutines)
        for g in body.gates:
            if isinstance(g.kind, (Named, RGate)):
                top = max(top, quantum_arity(g, state.live))
            state.apply(g)
    return top


def is_toffoli(g: Gate, kinds) -> bool:
    qc = [c for c in g.controls if kinds.get(c.wire, Q) is Q]
    return isinstance(g.kind, Named) and g.kind.name == "X" and len(qc) == 2 and all(c.positive for c in qc)


def respects_gateset(c: Circuit, gateset: str) -> bool:
    bodies = [Circuit(b.inputs, b.gates, b.outputs, c.subroutines) for b in c.subroutines.values()] + [c]
    for body in bodies:
        state = WireState(body.inputs, c.subroutines)
        for g in body.gates:
            if isinstance(g.kind, (Named, RGate)):
                n = quantum_arity(g, state.live)
                if n > 2 and not (gateset == TOFFOLI and n == 3 and is_toffoli(g, state.live)):
                    return False
            state.apply(g)
    return True

