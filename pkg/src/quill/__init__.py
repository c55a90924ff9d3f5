"""Build, print, parse, transform, simulate and count quantum circuits."""

from __future__ import annotations

from .builder import BuildContext, extract, extract_with_shape, stream
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
    gate_inverse,
    reverse,
    validate,
)
from .errors import QuillError
from .ops import (
    ClassicalFunction,
    box,
    classical_to_reversible,
    compile_classical,
    parse_boolexpr,
    reverse_endo,
    with_computed,
)
from .shapes import map_binary, map_binary_c, map_unary, parse_shape, qc_false
from .textformat import parse, serialize
from .transformers import decompose_binary, decompose_generic, decompose_toffoli, transform
from .wires import Bit, Qubit

__all__ = [
    "Bit",
    "BuildContext",
    "C",
    "CDiscard",
    "CInit",
    "Circuit",
    "ClassicalFunction",
    "Comment",
    "Control",
    "Gate",
    "Measure",
    "Named",
    "Q",
    "QInit",
    "QTerm",
    "QuillError",
    "Qubit",
    "RGate",
    "SubCall",
    "WireKind",
    "box",
    "classical_to_reversible",
    "compile_classical",
    "decompose_binary",
    "decompose_generic",
    "decompose_toffoli",
    "extract",
    "extract_with_shape",
    "gate_inverse",
    "map_binary",
    "map_binary_c",
    "map_unary",
    "parse",
    "parse_boolexpr",
    "parse_shape",
    "qc_false",
    "reverse",
    "reverse_endo",
    "serialize",
    "stream",
    "transform",
    "validate",
    "with_computed",
]
