"""The eleven acceptance criteria, each at its stated tolerance and time
budget.  A PASS/FAIL line per criterion is printed in the terminal summary
(see conftest.py)."""

from __future__ import annotations

import random
import time
import tracemalloc
from collections import Counter

import numpy as np
import pytest

from quill import Measure, Qubit, extract, parse, serialize
from quill.builder import BuildContext, stream
from quill.circuit import Control, Gate, Named, RGate, validate
from quill.circuit import Circuit, Q, QInit
from quill.programs import (
    ADDER,
    EXAMPLES,
    adder_circ,
    adder_reversible,
    bell00,
    example_circuit,
    inverse_qft_big_endian,
    qft_add_in_place,
    qft_add_in_place_boxed,
    qft_big_endian,
    teleport,
    teleport_generic,
)
from quill.resources import ResourceCounter, count, flatten
from quill.shapes import parse_shape
from quill.simulators import circuit_unitary, sim_classical, sim_stabilizer, sim_vector, sim_vector_state
from quill.transformers import BINARY, TOFFOLI, decompose, respects_gateset
from randcirc import random_circuit, random_clifford


def _random_state(rng: np.random.Generator) -> np.ndarray:
    v = rng.normal(size=2) + 1j * rng.normal(size=2)
    return v / np.linalg.norm(v)


def _dft(n: int) -> np.ndarray:
    N = 2**n
    j = np.arange(N)
    return np.exp(2j * np.pi * np.outer(j, j) / N) / np.sqrt(N)


def _phase_distance(a: np.ndarray, b: np.ndarray) -> float:
    """max |a - e^{i phi} b| with phi fixed by the largest entry of b."""
    k = np.unravel_index(np.argmax(np.abs(b)), b.shape)
    phase = a[k] / b[k]
    return float(np.max(np.abs(a - phase * b)))


def _bits(x: int, n: int) -> list[bool]:
    """``x`` as ``n`` booleans, most significant first."""
    return [bool(x >> (n - 1 - i) & 1) for i in range(n)]


def test_criterion_01_bell_state():
    t0 = time.perf_counter()
    c = extract(bell00)
    amps = sim_vector_state(c).amplitudes
    r = 1 / np.sqrt(2)
    assert np.max(np.abs(amps - np.array([r, 0, 0, r]))) <= 1e-12
    assert time.perf_counter() - t0 < 1.0


def test_criterion_02_teleportation():
    t0 = time.perf_counter()
    c = extract(teleport, Qubit)
    rng = np.random.default_rng(2024)
    worst = 0.0
    for _ in range(32):
        psi = _random_state(rng)
        for seed in range(8):
            out = sim_vector_state(c, psi, seed)
            worst = max(worst, abs(1 - out.fidelity(psi)))
    assert worst <= 1e-9
    assert time.perf_counter() - t0 < 5.0


@pytest.mark.parametrize("shape_text, leaves", [("(q,q)", 2), ("[q;3]", 3)])
def test_criterion_03_generic_teleportation(shape_text, leaves):
    t0 = time.perf_counter()
    c = extract(teleport_generic, parse_shape(shape_text))
    measures = [g for g in c.gates if isinstance(g.kind, Measure)]
    assert len(measures) == 2 * leaves
    assert len(c.inputs) == len(c.outputs) == leaves
    rng = np.random.default_rng(leaves)
    worst = 0.0
    for _ in range(32):
        parts = [_random_state(rng) for _ in range(leaves)]
        psi = parts[0]
        for p in parts[1:]:
            psi = np.kron(psi, p)
        for seed in range(8):
            out = sim_vector_state(c, psi, seed)
            worst = max(worst, abs(1 - out.fidelity(psi)))
    assert worst <= 1e-9
    assert time.perf_counter() - t0 < 10.0


def test_criterion_04_qft():
    t0 = time.perf_counter()
    for n in (1, 2, 3, 4):
        regs = [Qubit] * n
        u = circuit_unitary(extract(qft_big_endian, regs))
        assert np.max(np.abs(u - _dft(n))) <= 1e-10
        inv = circuit_unitary(extract(inverse_qft_big_endian, regs))
        assert np.max(np.abs(inv @ u - np.eye(2**n))) <= 1e-10
    assert time.perf_counter() - t0 < 10.0


def test_criterion_05_draper_adder():
    t0 = time.perf_counter()
    for n in (1, 2, 3, 4):
        c = extract(qft_add_in_place, [Qubit] * n, [Qubit] * n)
        mask = 2**n - 1
        for a in range(2**n):
            for b in range(2**n):
                amps = sim_vector_state(c, _bits(a, n) + _bits(b, n)).amplitudes
                k = int(np.argmax(np.abs(amps)))
                assert abs(abs(amps[k]) - 1) <= 1e-9
                assert k >> n == a
                assert k & mask == (a + b) % 2**n
    assert time.perf_counter() - t0 < 60.0


def test_criterion_06_full_adder():
    t0 = time.perf_counter()
    c = extract(adder_circ, (Qubit, Qubit, Qubit))
    for x in range(8):
        a, b, cin = _bits(x, 3)
        s, cout = sim_classical(c, [a, b, cin])[:2]
        assert s == (a ^ b ^ cin)
        assert cout == ((a and b) or (a and cin) or (b and cin))
        assert (s, cout) == ADDER([a, b, cin])
    rev = extract(adder_reversible, ((Qubit, Qubit, Qubit), (Qubit, Qubit)))
    validate(rev)
    assert len(rev.outputs) == 5
    for v in range(32):
        bits = _bits(v, 5)
        out = sim_classical(rev, bits)  # raises if any QTerm assertion fails
        fx = ADDER(bits[:3])
        assert list(out) == bits[:3] + [bits[3] ^ fx[0], bits[4] ^ fx[1]]
    assert time.perf_counter() - t0 < 5.0


def _gate_circuit(n: int, gate: Gate) -> Circuit:
    return Circuit(tuple((i, Q) for i in range(n)), (gate,), tuple((i, Q) for i in range(n)))


def _decomposition_suite() -> list[Circuit]:
    suite = [
        _gate_circuit(3, Gate(Named("X"), (2,), (Control(0), Control(1)))),
        _gate_circuit(4, Gate(Named("X"), (3,), (Control(0), Control(1), Control(2)))),
        _gate_circuit(4, Gate(Named("X"), (0,), (Control(1, False), Control(2), Control(3, False)))),
        _gate_circuit(3, Gate(Named("Z"), (2,), (Control(0), Control(1)))),
        _gate_circuit(3, Gate(Named("H"), (0,), (Control(2), Control(1, False)))),
        _gate_circuit(4, Gate(Named("T"), (1,), (Control(0), Control(2), Control(3)), True)),
    ]
    for m in range(1, 5):
        for inv in (False, True):
            suite.append(_gate_circuit(2, Gate(RGate(m), (1,), (Control(0),), inv)))
            suite.append(_gate_circuit(3, Gate(RGate(m), (0,), (Control(2), Control(1, False)), inv)))
    for name in "HXYZST":
        suite.append(_gate_circuit(2, Gate(Named(name), (0,), (Control(1, False),))))
    suite.append(extract(adder_circ, (Qubit, Qubit, Qubit)))
    suite.append(extract(qft_big_endian, [Qubit] * 3))
    suite.append(extract(qft_add_in_place_boxed, [Qubit] * 2, [Qubit] * 2))
    return suite


def test_criterion_07_decomposition():
    t0 = time.perf_counter()
    for c in _decomposition_suite():
        u = circuit_unitary(c)
        for gateset in (BINARY, TOFFOLI):
            d = decompose(c, gateset)
            validate(d)
            assert respects_gateset(d, gateset)
            assert _phase_distance(circuit_unitary(d), u) <= 1e-9
    assert time.perf_counter() - t0 < 30.0


def test_criterion_08_simulator_cross_validation():
    t0 = time.perf_counter()
    rnd = random.Random(8)
    runs = 2000
    for _ in range(50):
        c = random_clifford(rnd, rnd.randint(1, 5), rnd.randint(1, 40))
        stab, vec = Counter(), Counter()
        for seed in range(runs):
            for i, v in enumerate(sim_stabilizer(c, [], seed)):
                stab[i] += v
            for i, v in enumerate(sim_vector(c, [], seed)):
                vec[i] += v
        for i in range(len(c.outputs)):
            fs, fv = stab[i] / runs, vec[i] / runs
            if fs in (0.0, 1.0) or fv in (0.0, 1.0):
                assert fs == fv
            assert abs(fs - fv) <= 0.04
    assert time.perf_counter() - t0 < 120.0


def _seven(ctx: BuildContext, q):
    for name in "HXYZST":
        ctx.apply_named(name, q)
    return ctx.rgate(3, q)


def test_criterion_09_hierarchical_counting():
    t0 = time.perf_counter()
    c = extract(lambda ctx, q: ctx.box("seven", _seven, q, repetitions=10**9), Qubit)
    assert len(c.gates) == 1
    start = time.perf_counter()
    report = count(c)
    assert time.perf_counter() - start < 1.0
    assert report.total == 7 * 10**9
    for n in range(1, 7):
        boxed = extract(qft_add_in_place_boxed, [Qubit] * n, [Qubit] * n)
        flat = extract(qft_add_in_place, [Qubit] * n, [Qubit] * n)
        assert count(boxed).as_dict() == count(flatten(boxed)).as_dict() == count(flat).as_dict()
    assert time.perf_counter() - t0 < 10.0


def _example_circuits() -> list[Circuit]:
    out = []
    for name, ex in EXAMPLES.items():
        if ex.sized:
            out.extend(example_circuit(name, n)[0] for n in (0, 1, 3, 5))
        elif ex.shaped:
            out.extend(example_circuit(name, shape=s)[0] for s in ("q", "(q,q)", "[q;3]", "((q,[q;2]),q)"))
        else:
            out.append(example_circuit(name)[0])
    return out


def test_criterion_10_round_trip():
    t0 = time.perf_counter()
    rnd = random.Random(10)
    circuits = _example_circuits() + [random_circuit(rnd) for _ in range(100)]
    for c in circuits:
        validate(c)
        text = serialize(c)
        back = parse(text)
        assert back == c
        assert serialize(back) == text
    assert time.perf_counter() - t0 < 10.0


def _repetitive(iterations: int):
    def program(ctx: BuildContext, qs):
        n = len(qs)
        for i in range(iterations):
            a, b = qs[i % n], qs[(i + 1) % n]

            def compute():
                t = ctx.qinit(False)
                return ctx.qnot(t, controls=[a, b])

            ctx.with_computed(compute, lambda t: ctx.gate_Z(qs[(i + 2) % n], controls=t))
        return qs

    return program


def test_criterion_11_streaming():
    t0 = time.perf_counter()
    iterations = 200_000  # five gates each
    counter = ResourceCounter()
    header = stream(_repetitive(iterations), [Qubit] * 4, sink=counter)
    assert header.gate_count == 10**6
    assert counter.report(4).total == 10**6
    assert header.peak_buffered <= 2  # the two-gate compute segment
    assert time.perf_counter() - t0 < 30.0

    def peak_bytes(iters):
        tracemalloc.start()
        stream(_repetitive(iters), [Qubit] * 4, sink=ResourceCounter())
        peak = tracemalloc.get_traced_memory()[1]
        tracemalloc.stop()
        return peak

    small, large = peak_bytes(2_000), peak_bytes(20_000)
    # ten times the gates, essentially the same memory
    assert large < small + 64 * 1024
    assert time.perf_counter() - t0 < 30.0
