from __future__ import annotations

import random
from dataclasses import dataclass

import numpy as np
import pytest

from quill.builder import extract
from quill.circuit import Circuit, Comment, Control, Gate, Named, Q, C, RGate, validate
from quill.errors import UnsupportedGate
from quill.programs import adder_circ, qft_add_in_place_boxed, qft_big_endian, teleport
from quill.simulators import circuit_unitary, sim_classical, sim_vector
from quill.transformers import (
    BINARY,
    TOFFOLI,
    Decomposer,
    decompose,
    decompose_generic,
    drop_comments,
    identity,
    max_quantum_arity,
    respects_gateset,
    transform,
)
from quill.wires import Qubit
from randcirc import random_circuit


def _bits(x, n):
    return [bool(x >> (n - 1 - i) & 1) for i in range(n)]


def test_identity_rule_keeps_everything():
    rnd = random.Random(0)
    for _ in range(20):
        c = random_circuit(rnd)
        assert transform(identity, c) == c


def test_drop_comments():
    c = transform(drop_comments, extract(qft_big_endian, [Qubit] * 3))
    assert not any(isinstance(g.kind, Comment) for g in c.gates)
    validate(c)


def test_rule_sees_every_gate_once():
    c = extract(teleport, Qubit)
    seen = []

    def spy(g, env):
        seen.append(g)
        return (g,)

    transform(spy, c)
    assert seen == list(c.gates)


@dataclass(frozen=True)
class Mystery:
    pass


def test_unknown_gate_kind_is_rejected():
    c = Circuit(((0, Q),), (Gate(Mystery(), (0,)),), ((0, Q),))
    with pytest.raises(UnsupportedGate):
        transform(Decomposer(BINARY), c)


def test_unknown_gateset():
    with pytest.raises(ValueError):
        Decomposer("clifford+t")


def test_toffoli_kept_only_in_toffoli_set():
    c = Circuit(tuple((i, Q) for i in range(3)), (Gate(Named("X"), (2,), (Control(0), Control(1))),),
                tuple((i, Q) for i in range(3)))
    assert decompose(c, TOFFOLI).gates == c.gates
    binary = decompose(c, BINARY)
    assert max_quantum_arity(binary) == 2
    assert len(binary.gates) == 15
    assert not respects_gateset(c, BINARY) and respects_gateset(c, TOFFOLI)


def test_classical_controls_are_carried():
    gates = (Gate(Named("H"), (0,), (Control(1), Control(2))),)
    c = Circuit(((0, Q), (1, Q), (2, C)), gates, ((0, Q), (1, Q), (2, C)))
    d = decompose(c, BINARY)
    validate(d)
    for g in d.gates:
        if isinstance(g.kind, (Named, RGate)):
            assert Control(2) in g.controls


def test_many_controls_use_scoped_ancillas():
    n = 6
    c = Circuit(tuple((i, Q) for i in range(n)),
                (Gate(RGate(3), (0,), tuple(Control(i) for i in range(1, n))),),
                tuple((i, Q) for i in range(n)))
    d = decompose(c, TOFFOLI)
    validate(d)
    assert len(d.inputs) == len(d.outputs) == n
    assert np.allclose(circuit_unitary(d), circuit_unitary(c))


def test_decomposed_adder_truth_table():
    c = extract(adder_circ, (Qubit, Qubit, Qubit))
    for gateset in (BINARY, TOFFOLI):
        d = decompose(c, gateset)
        for x in range(8):
            bits = _bits(x, 3)
            assert sim_vector(d, bits, 1)[:2] == sim_classical(c, bits)[:2]


def test_toffoli_output_stays_classical():
    d = decompose(extract(adder_circ, (Qubit, Qubit, Qubit)), TOFFOLI)
    for x in range(8):
        assert sim_classical(d, _bits(x, 3)) == sim_classical(extract(adder_circ, (Qubit, Qubit, Qubit)), _bits(x, 3))


def test_subroutine_bodies_are_rewritten():
    c = extract(qft_add_in_place_boxed, [Qubit] * 2, [Qubit] * 2)
    d = decompose(c, BINARY)
    assert set(d.subroutines) == set(c.subroutines)
    assert respects_gateset(d, BINARY)


def test_decompose_during_generation_matches_afterwards():
    regs = [Qubit] * 3
    on_the_fly = extract(decompose_generic(BINARY, adder_circ), tuple(regs))
    after = decompose(extract(adder_circ, tuple(regs)), BINARY)
    assert respects_gateset(on_the_fly, BINARY)
    assert np.allclose(circuit_unitary(on_the_fly), circuit_unitary(after))
