"""Boolean simulation of circuits built from X gates and wire bookkeeping."""

from __future__ import annotations

from ..circuit import Named
from ..errors import AssertionFailed, NotClassical


class ClassicalBackend:
    def __init__(self):
        self.values: dict[int, bool] = {}

    def init_q(self, w: int, value: bool) -> None:
        self.values[w] = bool(value)

    def term_q(self, w: int, value: bool) -> None:
        got = self.values.pop(w)
        if got != value:
            raise AssertionFailed(f"qubit terminated asserting {int(value)} holds {int(got)}")

    def measure(self, w: int) -> bool:
        return self.values.pop(w)

    def unitary(self, g, target: int, controls) -> None:
        if type(g.kind) is not Named or g.kind.name != "X":
            raise NotClassical(f"{g.kind!r} is not a classical gate")
        values = self.values
        for w, positive in controls:
            if values[w] != positive:
                return
        values[target] = not values[target]

    def value(self, w: int) -> bool:
        return self.values[w]
