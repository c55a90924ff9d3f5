"""Circuit intermediate representation.

A circuit is a header of typed input wires, an ordered list of gates and a
header of typed output wires, plus a namespace of named subroutines that
``SubCall`` gates refer to.  Wire identifiers are plain integers that are
never reused once a wire has been terminated.
"""

from __future__ import annotations

import enum
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field

from .errors import (
    ArityMismatch,
    ControlNotAllowed,
    DeadWire,
    DuplicateWire,
    InvalidGate,
    KindMismatch,
    NotInvertible,
    OutputMismatch,
    QuantumControlOnClassicalOp,
    SubroutineCycle,
    UnknownSubroutine,
)


class WireKind(enum.Enum):
    QUANTUM = "Qbit"
    CLASSICAL = "Cbit"

    def __repr__(self) -> str:
        return f"WireKind.{self.name}"


Q = WireKind.QUANTUM
C = WireKind.CLASSICAL

GATE_NAMES = ("H", "X", "Y", "Z", "S", "T")
SELF_INVERSE = frozenset({"H", "X", "Y", "Z"})


@dataclass(frozen=True, slots=True)
class Control:
    wire: int
    positive: bool = True


# ---------------------------------------------------------------- gate kinds


@dataclass(frozen=True, slots=True)
class QInit:
    value: bool


@dataclass(frozen=True, slots=True)
class QTerm:
    value: bool


@dataclass(frozen=True, slots=True)
class CInit:
    value: bool


@dataclass(frozen=True, slots=True)
class CDiscard:
    pass


@dataclass(frozen=True, slots=True)
class Named:
    name: str


@dataclass(frozen=True, slots=True)
class RGate:
    """Phase gate diag(1, exp(2*pi*i / 2**m))."""

    m: int


@dataclass(frozen=True, slots=True)
class Measure:
    pass


@dataclass(frozen=True, slots=True)
class Comment:
    """A no-op annotation; ``labels[i]`` names the gate's ``operands[i]``."""

    text: str
    labels: tuple[str, ...] = ()


@dataclass(frozen=True, slots=True)
class SubCall:
    """Call of a boxed subroutine.

    The gate's operands are the caller wires consumed by the call and
    ``outputs`` the caller wires it produces.  An output equal to one of the
    operands continues that wire; any other output is a freshly allocated
    wire.  When the gate is inverted the reversed body is executed, so the
    operands line up with the callee's *outputs*.
    """

    name: str
    outputs: tuple[int, ...]
    repetitions: int = 1


GateKind = QInit | QTerm | CInit | CDiscard | Named | RGate | Measure | Comment | SubCall


@dataclass(frozen=True, slots=True)
class Gate:
    kind: GateKind
    operands: tuple[int, ...]
    controls: tuple[Control, ...] = ()
    inverted: bool = False

    @property
    def wires(self) -> tuple[int, ...]:
        """Every wire the gate touches: operands first, then controls."""
        return self.operands + tuple(c.wire for c in self.controls)


@dataclass(frozen=True)
class Circuit:
    inputs: tuple[tuple[int, WireKind], ...] = ()
    gates: tuple[Gate, ...] = ()
    outputs: tuple[tuple[int, WireKind], ...] = ()
    subroutines: Mapping[str, Circuit] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "inputs", tuple((int(w), k) for w, k in self.inputs))
        object.__setattr__(self, "outputs", tuple((int(w), k) for w, k in self.outputs))
        object.__setattr__(self, "gates", tuple(self.gates))
        object.__setattr__(self, "subroutines", dict(self.subroutines))

    __hash__ = None

    @property
    def input_kinds(self) -> tuple[WireKind, ...]:
        return tuple(k for _, k in self.inputs)

    @property
    def output_kinds(self) -> tuple[WireKind, ...]:
        return tuple(k for _, k in self.outputs)

    def max_wire(self) -> int:
        """Largest wire id mentioned anywhere in the main body, or -1."""
        top = -1
        for w, _ in self.inputs + self.outputs:
            top = max(top, w)
        for g in self.gates:
            for w in g.wires:
                top = max(top, w)
            if isinstance(g.kind, SubCall) and g.kind.outputs:
                top = max(top, max(g.kind.outputs))
        return top


# ------------------------------------------------------------------ checking


class WireState:
    """Live-wire bookkeeping shared by :func:`validate` and the builder.

    ``apply`` checks one gate against the current live set and then updates
    the set; it raises the first rule violation it finds.
    """

    __slots__ = ("live", "used", "high", "namespace", "name")

    def __init__(self, inputs=(), namespace: Mapping[str, Circuit] | None = None, name=None, *, monotonic=False):
        # With ``monotonic`` every new wire id must exceed all earlier ones,
        # which needs O(1) memory instead of remembering every id ever used.
        self.live: dict[int, WireKind] = {}
        self.used: set[int] | None = None if monotonic else set()
        self.high = -1
        self.namespace = namespace if namespace is not None else {}
        self.name = name
        for w, k in inputs:
            if w in self.live:
                raise DuplicateWire(f"input wire {w} declared twice", None, name)
            self.allocate(w, k)

    def allocate(self, wire: int, kind: WireKind, index=None) -> None:
        if self.used is None:
            if wire <= self.high:
                raise DuplicateWire(f"wire {wire} is not newer than every earlier wire", index, self.name)
            self.high = wire
        elif wire in self.used:
            raise DuplicateWire(f"wire {wire} is already in use or was used before", index, self.name)
        else:
            self.used.add(wire)
        self.live[wire] = kind

    def _need(self, wire, kind, index):
        k = self.live.get(wire)
        if k is None:
            raise DeadWire(f"wire {wire} is not live", index, self.name)
        if kind is not None and k is not kind:
            raise KindMismatch(f"wire {wire} is {k.value}, expected {kind.value}", index, self.name)
        return k

    def _controls(self, gate, index, *, classical_op=False, allowed=True):
        seen = set(gate.operands)
        if len(seen) != len(gate.operands):
            raise DuplicateWire("operand listed twice", index, self.name)
        for c in gate.controls:
            k = self.live.get(c.wire)
            if k is None:
                raise DeadWire(f"control wire {c.wire} is not live", index, self.name)
            if c.wire in seen:
                raise DuplicateWire(f"wire {c.wire} appears twice in one gate", index, self.name)
            seen.add(c.wire)
            if classical_op and k is Q:
                raise QuantumControlOnClassicalOp(
                    f"quantum wire {c.wire} controls a classical operation", index, self.name
                )
            if not allowed:
                raise ControlNotAllowed(f"{type(gate.kind).__name__} cannot be controlled", index, self.name)

    def _one(self, gate, index):
        if len(gate.operands) != 1:
            raise ArityMismatch(
                f"{type(gate.kind).__name__} takes 1 operand, got {len(gate.operands)}", index, self.name
            )
        return gate.operands[0]

    def apply(self, gate: Gate, index: int | None = None) -> None:
        kind = gate.kind
        t = type(kind)
        if t is Named or t is RGate:
            if t is Named and kind.name not in GATE_NAMES:
                raise InvalidGate(f"unknown gate name {kind.name!r}", index, self.name)
            if t is RGate and (not isinstance(kind.m, int) or kind.m < 1):
                raise InvalidGate(f"rotation index must be a positive integer, got {kind.m!r}", index, self.name)
            self._need(self._one(gate, index), Q, index)
            self._controls(gate, index)
        elif t is QInit:
            w = self._one(gate, index)
            self._controls(gate, index, allowed=False)
            self.allocate(w, Q, index)
        elif t is CInit:
            w = self._one(gate, index)
            self._controls(gate, index, classical_op=True, allowed=False)
            self.allocate(w, C, index)
        elif t is QTerm:
            w = self._one(gate, index)
            self._need(w, Q, index)
            self._controls(gate, index, allowed=False)
            del self.live[w]
        elif t is CDiscard:
            w = self._one(gate, index)
            self._need(w, C, index)
            self._controls(gate, index, classical_op=True, allowed=False)
            del self.live[w]
        elif t is Measure:
            w = self._one(gate, index)
            self._need(w, Q, index)
            self._controls(gate, index, allowed=False)
            self.live[w] = C
        elif t is Comment:
            if len(kind.labels) != len(gate.operands):
                raise ArityMismatch("comment needs one label per wire", index, self.name)
            for w in gate.operands:
                self._need(w, None, index)
            self._controls(gate, index, allowed=False)
        elif t is SubCall:
            self._subcall(gate, index)
        else:
            raise InvalidGate(f"unknown gate kind {kind!r}", index, self.name)

    def _subcall(self, gate, index):
        kind = gate.kind
        callee = self.namespace.get(kind.name)
        if callee is None:
            raise UnknownSubroutine(f"no subroutine named {kind.name!r}", index, self.name)
        if not isinstance(kind.repetitions, int) or kind.repetitions < 1:
            raise InvalidGate("repetitions must be a positive integer", index, self.name)
        in_kinds, out_kinds = callee.input_kinds, callee.output_kinds
        if gate.inverted:
            in_kinds, out_kinds = out_kinds, in_kinds
        if len(gate.operands) != len(in_kinds) or len(kind.outputs) != len(out_kinds):
            raise ArityMismatch(
                f"call of {kind.name!r} wires {len(gate.operands)}->{len(kind.outputs)}, "
                f"subroutine has {len(in_kinds)}->{len(out_kinds)}",
                index,
                self.name,
            )
        self._controls(gate, index, allowed=False)
        for w, k in zip(gate.operands, in_kinds):
            self._need(w, k, index)
        if kind.repetitions > 1 and (kind.outputs != gate.operands or in_kinds != out_kinds):
            raise ArityMismatch("repeated calls must map their wires onto themselves", index, self.name)
        if len(set(kind.outputs)) != len(kind.outputs):
            raise DuplicateWire("call output listed twice", index, self.name)
        consumed = set(gate.operands)
        for w in gate.operands:
            del self.live[w]
        for w, k in zip(kind.outputs, out_kinds):
            if w in consumed:
                self.live[w] = k
            else:
                self.allocate(w, k, index)

    def finish(self, outputs) -> None:
        outs = dict(outputs)
        if len(outs) != len(outputs):
            raise DuplicateWire("output wire declared twice", None, self.name)
        if outs != self.live:
            missing = sorted(set(self.live) - set(outs))
            extra = sorted(set(outs) - set(self.live))
            raise OutputMismatch(
                f"declared outputs do not match live wires (undeclared live: {missing}, "
                f"declared but not live: {extra}, or kinds differ)",
                None,
                self.name,
            )


def _callees(c: Circuit) -> set[str]:
    return {g.kind.name for g in c.gates if isinstance(g.kind, SubCall)}


def _check_cycles(namespace: Mapping[str, Circuit]) -> None:
    state: dict[str, int] = {}

    def visit(name, path):
        state[name] = 1
        for callee in sorted(_callees(namespace[name])):
            if callee not in namespace:
                continue
            if state.get(callee) == 1:
                raise SubroutineCycle(" -> ".join(path + [callee]))
            if callee not in state:
                visit(callee, path + [callee])
        state[name] = 2

    for name in namespace:
        if name not in state:
            visit(name, [name])


def validate(c: Circuit) -> None:
    """Raise a :class:`~quill.errors.ValidityError` unless ``c`` is well formed."""
    _check_cycles(c.subroutines)
    for name, body in c.subroutines.items():
        _validate_body(body, c.subroutines, name)
    _validate_body(c, c.subroutines, None)


def _validate_body(c: Circuit, namespace, name) -> None:
    state = WireState(c.inputs, namespace, name)
    for i, g in enumerate(c.gates):
        state.apply(g, i)
    state.finish(c.outputs)


def is_valid(c: Circuit) -> bool:
    try:
        validate(c)
    except Exception:
        return False
    return True


# ----------------------------------------------------------------- inversion


def gate_inverse(g: Gate) -> Gate:
    """Return the gate that undoes ``g``."""
    kind = g.kind
    t = type(kind)
    if t is Named:
        if kind.name in SELF_INVERSE:
            return g
        return Gate(kind, g.operands, g.controls, not g.inverted)
    if t is RGate:
        return Gate(kind, g.operands, g.controls, not g.inverted)
    if t is QInit:
        return Gate(QTerm(kind.value), g.operands, g.controls, g.inverted)
    if t is QTerm:
        return Gate(QInit(kind.value), g.operands, g.controls, g.inverted)
    if t is Comment:
        return g
    if t is SubCall:
        return Gate(
            SubCall(kind.name, g.operands, kind.repetitions),
            kind.outputs,
            g.controls,
            not g.inverted,
        )
    raise NotInvertible(f"{t.__name__} gates cannot be inverted")


def reverse_gates(gates: Iterable[Gate]) -> list[Gate]:
    return [gate_inverse(g) for g in reversed(list(gates))]


def reverse(c: Circuit) -> Circuit:
    """The inverse circuit: inverted gates in reverse order, headers swapped."""
    return Circuit(c.outputs, reverse_gates(c.gates), c.inputs, c.subroutines)
