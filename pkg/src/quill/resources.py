"""Gate, width and ancilla counts for hierarchical circuits.

Each subroutine body is counted once (per direction) and the result is
scaled by the repetition count of every call, so circuits whose flattened
size is astronomically large are counted in time proportional to the size
of their distinct bodies.
"""

from __future__ import annotations

import json
from collections import Counter
from collections.abc import Mapping
from dataclasses import dataclass, field

from .circuit import (
    CDiscard,
    CInit,
    Circuit,
    Comment,
    Control,
    Gate,
    Measure,
    Named,
    QInit,
    QTerm,
    RGate,
    SubCall,
    reverse,
)
from .errors import SizeBound

DEFAULT_FLATTEN_LIMIT = 10_000_000


def gate_class(g: Gate) -> str | None:
    """Reporting bucket of a gate; ``None`` for gates that are not counted."""
    kind = g.kind
    t = type(kind)
    if t is Named or t is RGate:
        base = kind.name if t is Named else f"QRot[{kind.m}]"
        if g.inverted and not (t is Named and kind.name in "HXYZ"):
            base += "*"
        k = len(g.controls)
        if k:
            base += f", {k} control" + ("s" if k > 1 else "")
        return base
    if t is QInit:
        return "QInit"
    if t is QTerm:
        return "QTerm"
    if t is CInit:
        return "CInit"
    if t is CDiscard:
        return "CDiscard"
    if t is Measure:
        return "Meas"
    return None


@dataclass
class ResourceReport:
    counts: Counter = field(default_factory=Counter)
    max_width: int = 0
    ancillas: int = 0
    measurements: int = 0

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    def as_dict(self) -> dict:
        return {
            "counts": {k: self.counts[k] for k in sorted(self.counts)},
            "total": self.total,
            "max_width": self.max_width,
            "ancillas": self.ancillas,
            "measurements": self.measurements,
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2)

    def table(self) -> str:
        rows = [(k, str(self.counts[k])) for k in sorted(self.counts)]
        rows.append(("Total gates", str(self.total)))
        rows.append(("Max width", str(self.max_width)))
        rows.append(("Ancillas", str(self.ancillas)))
        rows.append(("Measurements", str(self.measurements)))
        w = max(len(k) for k, _ in rows)
        v = max(len(x) for _, x in rows)
        return "\n".join(f"{k:<{w}}  {x:>{v}}" for k, x in rows)


class ResourceCounter:
    """Gate sink that accumulates a :class:`ResourceReport`.

    It can be handed to :func:`~quill.builder.stream` so counting happens
    while the circuit is generated; the subroutine namespace it needs for
    call gates is attached by ``bind_namespace``.
    """

    def __init__(self, namespace: Mapping[str, Circuit] | None = None, memo: dict | None = None):
        self.namespace = namespace if namespace is not None else {}
        self.memo = memo if memo is not None else {}
        self.counts: Counter = Counter()
        self.width = 0  # relative to the number of inputs
        self.peak = 0
        self.ancillas = 0
        self.measurements = 0
        self.gates_seen = 0

    def bind_namespace(self, namespace: Mapping[str, Circuit]) -> None:
        self.namespace = namespace

    def __call__(self, g: Gate) -> None:
        self.gates_seen += 1
        kind = g.kind
        t = type(kind)
        if t is SubCall:
            self._call(g)
            return
        if t is Comment:
            return
        self.counts[gate_class(g)] += 1
        if t is QInit or t is CInit:
            self.width += 1
            if self.width > self.peak:
                self.peak = self.width
            if t is QInit:
                self.ancillas += 1
        elif t is QTerm or t is CDiscard:
            self.width -= 1
        elif t is Measure:
            self.measurements += 1

    def _call(self, g: Gate) -> None:
        kind = g.kind
        sub = body_report(self.namespace, kind.name, g.inverted, self.memo)
        r = kind.repetitions
        for k, v in sub.counts.items():
            self.counts[k] += v * r
        self.ancillas += sub.ancillas * r
        self.measurements += sub.measurements * r
        n_in = len(g.operands)
        during = self.width - n_in + sub.max_width
        if during > self.peak:
            self.peak = during
        self.width += len(kind.outputs) - n_in

    def report(self, n_inputs: int) -> ResourceReport:
        return ResourceReport(
            Counter(self.counts),
            n_inputs + self.peak,
            self.ancillas,
            self.measurements,
        )


def body_report(namespace, name: str, inverted: bool, memo: dict) -> ResourceReport:
    key = (name, inverted)
    rep = memo.get(key)
    if rep is None:
        body = namespace[name]
        if inverted:
            body = reverse(body)
        counter = ResourceCounter(namespace, memo)
        for g in body.gates:
            counter(g)
        rep = memo[key] = counter.report(len(body.inputs))
    return rep


def count(c: Circuit) -> ResourceReport:
    """Resources of ``c`` with every subroutine call expanded arithmetically."""
    counter = ResourceCounter(c.subroutines)
    for g in c.gates:
        counter(g)
    return counter.report(len(c.inputs))


# ----------------------------------------------------------------- flatten


def flatten(c: Circuit, depth: int | None = None, *, max_gates: int = DEFAULT_FLATTEN_LIMIT) -> Circuit:
    """Inline subroutine calls, ``depth`` levels deep (all levels by default).

    Inlined bodies get fresh wire ids; inverted calls inline the reversed
    body and repeated calls inline the body once per repetition.  Raises
    :class:`~quill.errors.SizeBound` if the result would exceed
    ``max_gates`` gates.
    """
    if depth is None and count(c).total > max_gates:
        raise SizeBound(f"flattened circuit would exceed {max_gates} gates")
    out: list[Gate] = []
    next_id = [c.max_wire() + 1]
    namespace = c.subroutines
    reversed_bodies: dict[str, Circuit] = {}
    kept_calls = [False]

    def fresh() -> int:
        w = next_id[0]
        next_id[0] += 1
        return w

    def body_of(name, inverted):
        if not inverted:
            return namespace[name]
        if name not in reversed_bodies:
            reversed_bodies[name] = reverse(namespace[name])
        return reversed_bodies[name]

    def push(g):
        out.append(g)
        if len(out) > max_gates:
            raise SizeBound(f"flattened circuit exceeds {max_gates} gates")

    def inline(gates, mapping: dict[int, int], top: bool, level: int):
        def m(w):
            return mapping.get(w, w) if top else mapping[w]

        for g in gates:
            kind = g.kind
            t = type(kind)
            if t is SubCall and (depth is None or level < depth):
                body = body_of(kind.name, g.inverted)
                current = [m(w) for w in g.operands]
                for _ in range(kind.repetitions):
                    sub = {w: v for (w, _), v in zip(body.inputs, current)}
                    inline(body.gates, sub, False, level + 1)
                    current = [sub[w] for w, _ in body.outputs]
                for o, v in zip(kind.outputs, current):
                    mapping[o] = v
                continue
            ctrls = tuple(Control(m(x.wire), x.positive) for x in g.controls)
            if t is QInit or t is CInit:
                w = g.operands[0]
                nw = w if top else fresh()
                mapping[w] = nw
                push(Gate(kind, (nw,), ctrls, g.inverted))
            elif t is SubCall:
                kept_calls[0] = True
                ops = tuple(m(w) for w in g.operands)
                consumed = dict(zip(g.operands, ops))
                outs = []
                for o in kind.outputs:
                    nw = consumed[o] if o in consumed else (o if top else fresh())
                    mapping[o] = nw
                    outs.append(nw)
                push(Gate(SubCall(kind.name, tuple(outs), kind.repetitions), ops, ctrls, g.inverted))
            else:
                push(Gate(kind, tuple(m(w) for w in g.operands), ctrls, g.inverted))

    mapping: dict[int, int] = {}
    inline(c.gates, mapping, True, 0)
    outputs = tuple((mapping.get(w, w), k) for w, k in c.outputs)
    subs = dict(namespace) if kept_calls[0] else {}
    return Circuit(c.inputs, out, outputs, subs)
