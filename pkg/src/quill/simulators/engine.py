"""Gate interpreter shared by the three simulators.

The interpreter walks a circuit, expands subroutine calls (including
inverted and repeated ones), keeps the values of classical wires, resolves
classical controls, and forwards everything quantum to a backend object
with the methods ``init_q``, ``term_q``, ``measure`` and ``unitary``.
Every wire of every call gets its own runtime id, so backends never see a
wire id twice.
"""

from __future__ import annotations

from ..circuit import (
    C,
    CDiscard,
    CInit,
    Circuit,
    Comment,
    Measure,
    Named,
    QInit,
    QTerm,
    RGate,
    SubCall,
    reverse,
)
from ..errors import SimulationError


class Machine:
    def __init__(self, backend, namespace):
        self.backend = backend
        self.namespace = namespace
        self.bits: dict[int, bool] = {}
        self._next = 0
        self._reversed: dict[str, Circuit] = {}

    def fresh(self) -> int:
        w = self._next
        self._next += 1
        return w

    def body(self, name: str, inverted: bool) -> Circuit:
        if not inverted:
            return self.namespace[name]
        if name not in self._reversed:
            self._reversed[name] = reverse(self.namespace[name])
        return self._reversed[name]

    def run(self, circuit: Circuit, env: dict[int, int], where: str = "") -> None:
        bits = self.bits
        backend = self.backend
        for i, g in enumerate(circuit.gates):
            kind = g.kind
            t = type(kind)
            try:
                if t is Named or t is RGate:
                    target = env[g.operands[0]]
                    quantum = []
                    fire = True
                    for c in g.controls:
                        w = env[c.wire]
                        if w in bits:
                            if bits[w] != c.positive:
                                fire = False
                                break
                        else:
                            quantum.append((w, c.positive))
                    if fire:
                        backend.unitary(g, target, quantum)
                elif t is QInit:
                    w = env[g.operands[0]] = self.fresh()
                    backend.init_q(w, kind.value)
                elif t is QTerm:
                    backend.term_q(env.pop(g.operands[0]), kind.value)
                elif t is Measure:
                    w = env[g.operands[0]]
                    bits[w] = backend.measure(w)
                elif t is CInit:
                    w = env[g.operands[0]] = self.fresh()
                    bits[w] = kind.value
                elif t is CDiscard:
                    del bits[env.pop(g.operands[0])]
                elif t is SubCall:
                    self._call(g, env, where)
                elif t is Comment:
                    pass
                else:
                    raise SimulationError(f"cannot simulate {kind!r}")
            except SimulationError as e:
                if getattr(e, "index", None) is None:
                    e.index = i
                    e.args = (f"{where}gate {i}: {e.args[0] if e.args else ''}",)
                raise

    def _call(self, g, env, where):
        kind = g.kind
        callee = self.body(kind.name, g.inverted)
        current = [env.pop(w) for w in g.operands]
        for _ in range(kind.repetitions):
            sub = {w: rt for (w, _), rt in zip(callee.inputs, current)}
            self.run(callee, sub, f"{where}{kind.name}: ")
            current = [sub[w] for w, _ in callee.outputs]
        for w, rt in zip(kind.outputs, current):
            env[w] = rt

    def start(self, circuit: Circuit, values, init_q=True) -> dict[int, int]:
        """Allocate runtime wires for the circuit inputs, set to ``values``."""
        values = list(values)
        if len(values) != len(circuit.inputs):
            raise SimulationError(f"circuit has {len(circuit.inputs)} inputs, got {len(values)} values")
        env = {}
        for (w, k), v in zip(circuit.inputs, values):
            rt = env[w] = self.fresh()
            if k is C:
                self.bits[rt] = bool(v)
            elif init_q:
                self.backend.init_q(rt, bool(v))
        return env
