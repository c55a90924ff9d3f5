from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quill.circuit import Circuit, Comment, Control, Gate, Named, Q, SubCall
from quill.errors import DeadWire, ParseError
from quill.textformat import format_gate, parse, parse_gate, serialize, to_dict
from randcirc import random_circuit

MINIMAL = 'Inputs: 0:Qbit\nQGate["H"](0)\nOutputs: 0:Qbit\n'


def test_minimal_document():
    c = Circuit(((0, Q),), (Gate(Named("H"), (0,)),), ((0, Q),))
    assert serialize(c) == MINIMAL
    assert parse(MINIMAL) == c


def test_empty_circuit():
    assert serialize(Circuit()) == "Inputs:\nOutputs:\n"
    assert parse("Inputs:\nOutputs:\n") == Circuit()


@pytest.mark.parametrize(
    "line",
    [
        "QInit0(3)",
        "QTerm1(4)",
        "CInit1(0)",
        "CDiscard(7)",
        'QGate["X"](2) with controls=[+0,-1]',
        'QGate["T"](0) with inverse',
        "QRot[5](1) with controls=[+3] with inverse",
        "QMeas(2)",
        'Comment["ENTER: f"](0:"a",1:"b")',
        'Comment[""]()',
        'Call["QFT",1](0,1) -> (0,1)',
        'Call["f",3](4) -> (4) with inverse',
        'Call["alloc",1]() -> (5)',
    ],
)
def test_gate_lines_round_trip(line):
    assert format_gate(parse_gate(line)) == line


def test_parse_tolerates_spacing_and_comments():
    text = """
    -- a comment line
    Inputs: 0:Qbit , 1:Cbit   -- trailing
    QGate[ "X" ]( 0 )  with controls=[ -1 ]
    Comment["-- kept"](0:"q")
    Outputs: 0:Qbit, 1:Cbit
    """
    c = parse(text)
    assert c.gates[0].controls == (Control(1, False),)
    assert c.gates[1].kind == Comment("-- kept", ("q",))


def test_subroutines_come_first():
    text = serialize(
        Circuit(
            ((0, Q),),
            (Gate(SubCall("f", (0,)), (0,), (), True),),
            ((0, Q),),
            {"f": Circuit(((0, Q),), (Gate(Named("S"), (0,)),), ((0, Q),))},
        )
    )
    assert text.splitlines()[0] == 'Subroutine: "f"'
    assert parse(text).subroutines["f"].gates[0].kind == Named("S")


@pytest.mark.parametrize(
    "text, line",
    [
        ("Outputs:\n", 1),
        ("Inputs: 0:Qbit\nQGate[H](0)\nOutputs: 0:Qbit\n", 2),
        ("Inputs: 0:Qubit\nOutputs:\n", 1),
        ("Inputs: 0:Qbit\nQGate[\"H\"](0) with control=[+1]\nOutputs: 0:Qbit\n", 2),
        ("Inputs: 0:Qbit\nQGate[\"H\"](0)\n", 2),
        ("Inputs:\nOutputs:\nQInit0(0)\n", 3),
        ('Subroutine: f\nInputs:\nOutputs:\nInputs:\nOutputs:\n', 1),
    ],
)
def test_parse_errors_report_lines(text, line):
    with pytest.raises(ParseError) as err:
        parse(text)
    assert err.value.line == line


def test_semantic_errors_surface_after_parsing():
    text = "Inputs: 0:Qbit\nQTerm0(0)\nQGate[\"H\"](0)\nOutputs:\n"
    with pytest.raises(DeadWire):
        parse(text)
    assert len(parse(text, check=False).gates) == 2


def test_json_form_has_the_same_content():
    c = random_circuit(random.Random(3))
    d = to_dict(c)
    assert len(d["gates"]) == len(c.gates)
    assert set(d["subroutines"]) == set(c.subroutines)


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**32))
def test_round_trip_random_circuits(seed):
    c = random_circuit(random.Random(seed))
    text = serialize(c)
    assert parse(text) == c
    assert serialize(parse(text)) == text
