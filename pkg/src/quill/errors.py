"""Exception hierarchy shared by every quill module."""

from __future__ import annotations


class QuillError(Exception):
    """Base class for all errors raised by quill."""


class ValidityError(QuillError):
    """A circuit (or an emitted gate) breaks one of the circuit-model rules.

    ``index`` is the position of the offending gate in its gate list, or
    ``None`` when the problem is with the circuit header (inputs/outputs).
    """

    rule = "invalid"

    def __init__(self, message: str, index: int | None = None, circuit: str | None = None):
        self.index = index
        self.circuit = circuit
        where = []
        if circuit is not None:
            where.append(f"subroutine {circuit!r}")
        if index is not None:
            where.append(f"gate {index}")
        prefix = f"{', '.join(where)}: " if where else ""
        super().__init__(f"{prefix}{self.rule}: {message}")


class DeadWire(ValidityError):
    rule = "dead wire"


class DuplicateWire(ValidityError):
    rule = "duplicate wire"


class KindMismatch(ValidityError):
    rule = "kind mismatch"


class QuantumControlOnClassicalOp(ValidityError):
    rule = "quantum control on classical operation"


class ControlNotAllowed(ValidityError):
    rule = "control not allowed"


class UnknownSubroutine(ValidityError):
    rule = "unknown subroutine"


class ArityMismatch(ValidityError):
    rule = "arity mismatch"


class SubroutineCycle(ValidityError):
    rule = "subroutine cycle"


class OutputMismatch(ValidityError):
    rule = "output mismatch"


class InvalidGate(ValidityError):
    rule = "invalid gate"


class ParseError(QuillError):
    def __init__(self, line: int, message: str):
        self.line = line
        super().__init__(f"line {line}: {message}")


class DeadHandle(QuillError):
    """A qubit/bit handle was used after its wire was measured or terminated."""


class SelfControl(QuillError):
    """A gate was controlled by its own target."""


class NotInvertible(QuillError):
    pass


class NotEndomorphic(QuillError):
    pass


class NameCollision(QuillError):
    pass


class ShapeMismatch(QuillError):
    pass


class UnsupportedGate(QuillError):
    pass


class SizeBound(QuillError):
    pass


class SimulationError(QuillError):
    pass


class NotClassical(SimulationError):
    pass


class NotClifford(SimulationError):
    pass


class AssertionFailed(SimulationError):
    pass


class TooManyQubits(SimulationError):
    pass
