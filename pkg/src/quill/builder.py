"""Circuit-building context.

Circuit-producing functions take a :class:`BuildContext` as their first
argument and call its primitive operations; every call appends one gate to
the circuit under construction, so gates are produced in program order
while the program runs.  A sink callback receives the gates as they are
emitted; without one they are accumulated in ``ctx.gates``.

Example::

    def bell00(ctx):
        a = ctx.hadamard(ctx.qinit(False))
        b = ctx.qnot(ctx.qinit(False), controls=a)
        return a, b

    circuit = extract(bell00)
"""

from __future__ import annotations

from collections.abc import Callable, Iterable
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Any, NamedTuple

from .circuit import (
    C,
    CDiscard,
    CInit,
    Circuit,
    Comment,
    Control,
    Gate,
    Measure,
    Named,
    Q,
    QInit,
    QTerm,
    RGate,
    SubCall,
    WireKind,
    WireState,
    reverse_gates,
)
from .errors import DeadHandle, DuplicateWire, NameCollision, NotEndomorphic, QuillError, SelfControl
from .shapes import describe, is_node, leaves, map_leaves, rebuild, require_leaves, same_shape
from .wires import Bit, Qubit

Sink = Callable[[Gate], None]
# A rewrite rule maps one gate to a gate sequence.  Its second argument
# offers ``fresh()`` (a new wire id) and ``kind(wire)``.
Rule = Callable[[Gate, Any], Iterable[Gate]]

_NAMED = {name: Named(name) for name in ("H", "X", "Y", "Z", "S", "T")}
_INIT = {False: QInit(False), True: QInit(True)}
_TERM = {False: QTerm(False), True: QTerm(True)}
_MEASURE = Measure()
_DISCARD = CDiscard()


@dataclass
class _Box:
    func: Callable
    signature: str
    out_template: Any


@dataclass
class _Shared:
    """State shared between a context and the child contexts building
    subroutine bodies."""

    subroutines: dict[str, Circuit] = field(default_factory=dict)
    boxes: dict[str, _Box] = field(default_factory=dict)
    rules: list[Rule] = field(default_factory=list)


class Header(NamedTuple):
    """What :func:`stream` returns: the circuit minus its gate list."""

    inputs: tuple
    outputs: tuple
    subroutines: dict
    gate_count: int
    output_template: Any
    peak_buffered: int = 0  # most gates held in memory at once


def _handle_for(kind: WireKind, wire: int):
    return Qubit(wire) if kind is Q else Bit(wire)


def _marker(h):
    if isinstance(h, Qubit):
        return Qubit
    if isinstance(h, Bit):
        return Bit
    return h


class BuildContext:
    def __init__(self, sink: Sink | None = None, *, transformers: Iterable[Rule] = (), _shared=None):
        self._shared = _shared if _shared is not None else _Shared(rules=list(transformers))
        self.state = WireState(namespace=self._shared.subroutines, monotonic=True)
        self.inputs: list[tuple[int, WireKind]] = []
        self._next = 0
        self._sink = sink
        self.gates: list[Gate] | None = [] if sink is None else None
        self._recorders: list[list[Gate]] = []
        self._block_controls: list[Control] = []
        self.gate_count = 0
        self.peak_buffered = 0

    # ------------------------------------------------------------- plumbing

    @property
    def subroutines(self) -> dict[str, Circuit]:
        return self._shared.subroutines

    def fresh(self) -> int:
        w = self._next
        self._next += 1
        return w

    def kind(self, wire: int) -> WireKind:
        """Kind of a live wire; wires unknown to this context count as quantum."""
        return self.state.live.get(wire, Q)

    def emit(self, gate: Gate) -> None:
        """Check ``gate`` against the live wires and pass it on."""
        self.state.apply(gate)
        self.gate_count += 1
        if self._recorders:
            for rec in self._recorders:
                rec.append(gate)
            self._note_buffer()
        rules = self._shared.rules
        out = (gate,)
        if rules:
            for rule in rules:
                out = [h for g in out for h in rule(g, self)]
        if self._sink is not None:
            for g in out:
                self._sink(g)
        else:
            self.gates.extend(out)
            self._note_buffer()

    def _note_buffer(self):
        n = sum(len(r) for r in self._recorders)
        if self.gates is not None:
            n += len(self.gates)
        if n > self.peak_buffered:
            self.peak_buffered = n

    def _wire(self, h, kind: WireKind) -> int:
        cls = Qubit if kind is Q else Bit
        if not isinstance(h, cls):
            raise TypeError(f"expected a {cls.__name__} handle, got {h!r}")
        if self.state.live.get(h.wire) is not kind:
            raise DeadHandle(f"{h!r} is no longer live")
        return h.wire

    def _any_wire(self, h) -> int:
        if isinstance(h, Qubit):
            return self._wire(h, Q)
        if isinstance(h, Bit):
            return self._wire(h, C)
        raise TypeError(f"expected a Qubit or Bit handle, got {h!r}")

    def _controls(self, controls, target: int) -> tuple[Control, ...]:
        out = list(self._block_controls)
        if controls is not None:
            for item in _control_items(controls):
                if isinstance(item, tuple):
                    h, positive = item
                else:
                    h, positive = item, True
                out.append(Control(self._any_wire(h), bool(positive)))
        for c in out:
            if c.wire == target:
                raise SelfControl(f"wire {target} cannot control itself")
        return tuple(out)

    # ---------------------------------------------------------- inputs/outputs

    def input(self, kind: WireKind = Q):
        w = self.fresh()
        self.state.allocate(w, kind)
        self.inputs.append((w, kind))
        return _handle_for(kind, w)

    def inputs_like(self, template):
        """Allocate input wires for every Qubit/Bit marker leaf of ``template``;
        other leaves are parameters and pass through unchanged."""

        def alloc(leaf):
            if leaf is Qubit:
                return self.input(Q)
            if leaf is Bit:
                return self.input(C)
            return leaf

        return map_leaves(alloc, template)

    def output_wires(self, result, *, allow_garbage: bool = True):
        """The circuit outputs for a program's return value.

        Returned handles come first, in depth-first order; any wire that is
        still live but was not returned follows in allocation order.
        """
        returned = []
        for h in leaves(result):
            if isinstance(h, (Qubit, Bit)):
                kind = Q if isinstance(h, Qubit) else C
                self._wire(h, kind)
                returned.append((h.wire, kind))
        if len({w for w, _ in returned}) != len(returned):
            raise DuplicateWire("a wire is returned twice")
        seen = {w for w, _ in returned}
        garbage = [(w, k) for w, k in sorted(self.state.live.items()) if w not in seen]
        if garbage and not allow_garbage:
            raise QuillError(f"wires {[w for w, _ in garbage]} are live but not returned")
        return tuple(returned + garbage)

    def finish(self, result=None, *, allow_garbage: bool = True) -> Circuit:
        if self.gates is None:
            raise QuillError("a streaming context has no gate list; use stream()")
        outputs = self.output_wires(result, allow_garbage=allow_garbage)
        return Circuit(tuple(self.inputs), tuple(self.gates), outputs, self.subroutines)

    # ------------------------------------------------------------ primitives

    def qinit(self, value):
        """Fresh qubit(s) in the basis state given by a bool (or a shape of bools)."""
        if is_node(value):
            require_leaves(value, bool, "qinit")
            return map_leaves(self.qinit, value)
        w = self.fresh()
        self.emit(Gate(_INIT[bool(value)], (w,)))
        return Qubit(w)

    def cinit(self, value):
        if is_node(value):
            require_leaves(value, bool, "cinit")
            return map_leaves(self.cinit, value)
        w = self.fresh()
        self.emit(Gate(CInit(bool(value)), (w,)))
        return Bit(w)

    def qterm(self, q, value=False) -> None:
        """Terminate qubit(s), asserting they are in the given basis state."""
        if is_node(q):
            values = value if is_node(value) else map_leaves(lambda _: value, q)
            for h, v in zip(leaves(q), leaves(values)):
                self.qterm(h, v)
            return
        self.emit(Gate(_TERM[bool(value)], (self._wire(q, Q),)))

    def measure(self, q):
        """Measure a qubit, or every qubit of a shape; returns Bit handles."""
        if is_node(q):
            require_leaves(q, Qubit, "measure")
            return map_leaves(self.measure, q)
        w = self._wire(q, Q)
        self.emit(Gate(_MEASURE, (w,)))
        return Bit(w)

    def cdiscard(self, b) -> None:
        if is_node(b):
            require_leaves(b, Bit, "cdiscard")
            for h in leaves(b):
                self.cdiscard(h)
            return
        self.emit(Gate(_DISCARD, (self._wire(b, C),)))

    def apply_named(self, name: str, q: Qubit, controls=None, *, inverse: bool = False) -> Qubit:
        w = self._wire(q, Q)
        kind = _NAMED.get(name) or Named(name)
        if controls is None and not self._block_controls:
            self.emit(Gate(kind, (w,), (), inverse))
        else:
            self.emit(Gate(kind, (w,), self._controls(controls, w), inverse))
        return q

    def hadamard(self, q, controls=None):
        return self.apply_named("H", q, controls)

    def qnot(self, q, controls=None):
        return self.apply_named("X", q, controls)

    gate_X = qnot

    def gate_Y(self, q, controls=None):
        return self.apply_named("Y", q, controls)

    def gate_Z(self, q, controls=None):
        return self.apply_named("Z", q, controls)

    def gate_S(self, q, controls=None, *, inverse=False):
        return self.apply_named("S", q, controls, inverse=inverse)

    def gate_T(self, q, controls=None, *, inverse=False):
        return self.apply_named("T", q, controls, inverse=inverse)

    def rgate(self, m: int, q: Qubit, controls=None, *, inverse: bool = False) -> Qubit:
        """Phase rotation diag(1, exp(2*pi*i / 2**m))."""
        w = self._wire(q, Q)
        self.emit(Gate(RGate(m), (w,), self._controls(controls, w), inverse))
        return q

    def controlled_not(self, target, control):
        """Flip ``target`` controlled by ``control``; both may be equal shapes."""
        if is_node(target) or is_node(control):
            if not same_shape(target, control):
                from .errors import ShapeMismatch

                raise ShapeMismatch(f"controlled_not on {describe(target)} and {describe(control)}")
            for t, c in zip(leaves(target), leaves(control)):
                self.qnot(t, controls=c)
            return target, control
        self.qnot(target, controls=control)
        return target, control

    @contextmanager
    def controlled(self, controls):
        """Add ``controls`` to every unitary gate emitted inside the block."""
        extra = []
        for item in _control_items(controls):
            h, positive = item if isinstance(item, tuple) else (item, True)
            extra.append(Control(self._any_wire(h), bool(positive)))
        self._block_controls.extend(extra)
        try:
            yield
        finally:
            del self._block_controls[len(self._block_controls) - len(extra):]

    # ---------------------------------------------------------- annotations

    def comment(self, text: str) -> None:
        self.emit(Gate(Comment(text, ()), ()))

    def comment_with_label(self, text: str, handles=(), names=()) -> None:
        pairs = _label_pairs(handles, names)
        wires = tuple(self._any_wire(h) for h, _ in pairs)
        self.emit(Gate(Comment(text, tuple(n for _, n in pairs)), wires))

    def label(self, handles, names) -> None:
        self.comment_with_label("", handles, names)

    # ------------------------------------------------------- circuit-level ops

    def with_computed(self, compute: Callable[[], Any], body: Callable[[Any], Any]):
        """Run ``compute``, then ``body`` on its result, then undo ``compute``."""
        rec: list[Gate] = []
        self._recorders.append(rec)
        try:
            mid = compute()
        finally:
            self._recorders.remove(rec)
        result = body(mid)
        self._emit_renamed(reverse_gates(rec), {})
        return result

    def _emit_renamed(self, gates: Iterable[Gate], mapping: dict[int, int]) -> None:
        """Emit gates whose wire ids live in another numbering.

        Wires missing from ``mapping`` keep their id; every wire a gate
        allocates gets a fresh id here.
        """
        for g in gates:
            kind = g.kind
            t = type(kind)
            ctrls = tuple(Control(mapping.get(c.wire, c.wire), c.positive) for c in g.controls)
            if t is QInit or t is CInit:
                w = self.fresh()
                mapping[g.operands[0]] = w
                self.emit(Gate(kind, (w,), ctrls, g.inverted))
                continue
            ops = tuple(mapping.get(w, w) for w in g.operands)
            if t is SubCall:
                consumed = dict(zip(g.operands, ops))
                outs = []
                for o in kind.outputs:
                    if o in consumed:
                        nw = consumed[o]
                    else:
                        nw = self.fresh()
                    mapping[o] = nw
                    outs.append(nw)
                kind = SubCall(kind.name, tuple(outs), kind.repetitions)
            self.emit(Gate(kind, ops, ctrls, g.inverted))

    def emit_circuit(self, circuit: Circuit, args) -> list:
        """Inline ``circuit`` with its inputs bound to the handles in ``args``
        (depth-first); returns handles for its outputs."""
        arg_handles = [h for h in leaves(args) if isinstance(h, (Qubit, Bit))]
        if len(arg_handles) != len(circuit.inputs):
            raise NotEndomorphic(f"circuit takes {len(circuit.inputs)} wires, got {len(arg_handles)}")
        mapping = {}
        for h, (w, kind) in zip(arg_handles, circuit.inputs):
            mapping[w] = self._wire(h, kind)
        for name, body in circuit.subroutines.items():
            self._register(name, body)
        self._emit_renamed(circuit.gates, mapping)
        return [_handle_for(k, mapping[w]) for w, k in circuit.outputs]

    def _register(self, name: str, body: Circuit) -> None:
        have = self.subroutines.get(name)
        if have is None:
            self.subroutines[name] = body
        elif have != body:
            raise NameCollision(f"subroutine {name!r} already defined with a different body")

    def child(self) -> BuildContext:
        """A fresh context for a subroutine body, sharing this one's namespace."""
        return BuildContext(_shared=self._shared)

    def box(self, name: str, func: Callable, *args, repetitions: int = 1):
        """Call ``func(ctx, *args)`` as a named subroutine.

        The body is generated the first time ``name`` is seen; later calls
        only emit a call gate.  Returns handles shaped like ``func``'s result.
        """
        template = map_leaves(_marker, list(args))
        signature = describe(template)
        info = self._shared.boxes.get(name)
        if info is None or info.func is not func:
            body, out_template = self._build(func, template)
            if info is not None or name in self.subroutines:
                if (info is not None and info.signature != signature) or self.subroutines.get(name) != body:
                    raise NameCollision(f"box {name!r} is already bound to a different circuit")
            else:
                self.subroutines[name] = body
            info = _Box(func, signature, out_template)
            self._shared.boxes[name] = info
        elif info.signature != signature:
            raise NameCollision(f"box {name!r} was generated for shape {info.signature}, called with {signature}")
        if self._block_controls:
            raise QuillError("subroutine calls cannot be controlled")

        body = self.subroutines[name]
        arg_wires = []
        for h in leaves(args):
            if isinstance(h, (Qubit, Bit)):
                arg_wires.append(self._any_wire(h))
        pos = {w: i for i, (w, _) in enumerate(body.inputs)}
        outs = []
        for w, _ in body.outputs:
            outs.append(arg_wires[pos[w]] if w in pos else self.fresh())
        self.emit(Gate(SubCall(name, tuple(outs), repetitions), tuple(arg_wires)))
        handles = iter(_handle_for(k, w) for w, (_, k) in zip(outs, body.outputs))
        return map_leaves(lambda leaf: next(handles) if leaf is Qubit or leaf is Bit else leaf, info.out_template)

    def _build(self, func, template):
        sub = self.child()
        args = sub.inputs_like(template)
        result = func(sub, *args)
        circuit = sub.finish(result, allow_garbage=False)
        return Circuit(circuit.inputs, circuit.gates, circuit.outputs), map_leaves(_marker, result)


def _control_items(controls):
    if isinstance(controls, (Qubit, Bit)):
        return [controls]
    if isinstance(controls, tuple) and len(controls) == 2 and isinstance(controls[1], bool):
        return [controls]
    if isinstance(controls, (tuple, list)):
        out = []
        for c in controls:
            out.extend(_control_items(c))
        return out
    raise TypeError(f"cannot use {controls!r} as a control")


def _label_pairs(handles, names):
    if isinstance(names, str):
        if not is_node(handles):
            return [(handles, names)]
        out = []
        for i, h in enumerate(handles):
            out.extend(_label_pairs(h, f"{names}[{i}]"))
        return out
    if not is_node(handles) or len(handles) != len(names):
        from .errors import ShapeMismatch

        raise ShapeMismatch("labels do not match the shape of the labelled data")
    out = []
    for h, n in zip(handles, names):
        out.extend(_label_pairs(h, n))
    return out


# ------------------------------------------------------------------ extract


def extract_with_shape(program: Callable, *args, transformers: Iterable[Rule] = ()):
    """Like :func:`extract` but also returns the output template: the
    program's return value with handles replaced by Qubit/Bit markers."""
    ctx = BuildContext(transformers=transformers)
    real = [ctx.inputs_like(a) for a in args]
    result = program(ctx, *real)
    return ctx.finish(result), map_leaves(_marker, result)


def extract(program: Callable, *args, transformers: Iterable[Rule] = ()) -> Circuit:
    """Run ``program(ctx, *args)`` and collect the circuit it builds.

    Each argument is a template: :class:`Qubit` / :class:`Bit` class markers
    (possibly nested in tuples and lists) become input wires, anything else
    is passed through as a generation-time parameter::

        extract(teleport, Qubit)
        extract(qft_big_endian, [Qubit] * 3)
        extract(plus_minus, False)
    """
    return extract_with_shape(program, *args, transformers=transformers)[0]


def stream(program: Callable, *args, sink: Sink, transformers: Iterable[Rule] = ()) -> Header:
    """Run ``program`` handing each gate to ``sink`` as it is emitted.

    No gate list is kept, so memory stays proportional to the number of
    live wires (plus whatever ``with_computed`` has to remember).
    """
    ctx = BuildContext(sink, transformers=transformers)
    # sinks that follow subroutine calls (such as a resource counter) need
    # the namespace the bodies are registered in
    bind = getattr(sink, "bind_namespace", None)
    if bind is not None:
        bind(ctx.subroutines)
    real = [ctx.inputs_like(a) for a in args]
    result = program(ctx, *real)
    outputs = ctx.output_wires(result)
    return Header(
        tuple(ctx.inputs),
        outputs,
        ctx.subroutines,
        ctx.gate_count,
        map_leaves(_marker, result),
        ctx.peak_buffered,
    )


def output_values(template, values):
    """Refill an output template's markers from ``values`` (one per marker)."""
    it = iter(values)
    return map_leaves(lambda leaf: next(it) if leaf is Qubit or leaf is Bit else leaf, template)


__all__ = [
    "BuildContext",
    "Header",
    "extract",
    "extract_with_shape",
    "stream",
    "output_values",
    "rebuild",
]
