from __future__ import annotations

import json
import subprocess
import sys

import pytest

from quill.cli import main, read_boolexprs
from quill.textformat import parse


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def pipe(*commands: list[str], stdin: str = "") -> subprocess.CompletedProcess:
    """Run ``python -m quill`` commands connected by pipes; returns the last."""
    text = stdin
    for argv in commands:
        proc = subprocess.run([sys.executable, "-m", "quill", *argv], input=text, capture_output=True, text=True)
        if proc.returncode:
            return proc
        text = proc.stdout
    return proc


def test_print_plus_minus(capsys):
    code, out, _ = run(capsys, "print", "plus_minus")
    assert code == 0
    assert out.splitlines() == ["Inputs:", "QInit0(0)", 'QGate["H"](0)', "Outputs: 0:Qbit"]


def test_print_empty_register(capsys):
    assert run(capsys, "print", "qft", "--n", "0")[1] == "Inputs:\nOutputs:\n"


def test_print_json(capsys):
    code, out, _ = run(capsys, "print", "bell00", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and len(doc["gates"]) == 4


def test_print_then_parse_is_stable(capsys, tmp_path):
    _, text, _ = run(capsys, "print", "teleport_generic", "--shape", "(q,[q;2])")
    path = tmp_path / "t.qc"
    path.write_text(text)
    code, again, _ = run(capsys, "parse", str(path))
    assert code == 0 and again == text


def test_simulate_teleport_of_one(capsys, tmp_path):
    path = tmp_path / "t.qc"
    path.write_text(run(capsys, "print", "teleport")[1])
    code, out, _ = run(capsys, "simulate", str(path), "--inputs", "1", "--runs", "20", "--seed", "5")
    lines = out.splitlines()
    assert code == 0
    assert lines[:20] == ["1"] * 20
    assert lines[20] == "frequencies:"


def test_simulate_shows_returned_outputs_only(capsys):
    code, out, _ = run(capsys, "simulate", "adder_circ", "--sim", "classical", "--inputs", "110")
    assert code == 0 and out == "01\n"


def test_seed_is_reproducible(capsys):
    a = run(capsys, "simulate", "bell00", "--runs", "30", "--seed", "9")[1]
    b = run(capsys, "simulate", "bell00", "--runs", "30", "--seed", "9")[1]
    assert a == b
    assert set(a.splitlines()[:30]) <= {"00", "11"}


def test_seed_from_environment(monkeypatch, capsys):
    monkeypatch.setenv("QUILL_SEED", "9")
    a = run(capsys, "simulate", "bell00", "--runs", "30")[1]
    monkeypatch.delenv("QUILL_SEED")
    assert a == run(capsys, "simulate", "bell00", "--runs", "30", "--seed", "9")[1]


def test_count_boxed_and_flat_agree(capsys):
    boxed = run(capsys, "count", "qft_add_boxed", "--n", "5", "--json")[1]
    flat = run(capsys, "count", "qft_add", "--n", "5", "--json")[1]
    flattened = run(capsys, "count", "qft_add_boxed", "--n", "5", "--json", "--flatten")[1]
    assert json.loads(boxed) == json.loads(flat) == json.loads(flattened)
    table = run(capsys, "count", "teleport")[1]
    assert "Measurements" in table


@pytest.mark.parametrize("gateset", ["binary", "toffoli"])
def test_decompose_output_parses(capsys, gateset):
    code, out, _ = run(capsys, "decompose", "adder_circ", "--gateset", gateset)
    assert code == 0
    assert out.startswith("-- returned outputs: 2\n")
    parse(out)


def test_decompose_then_simulate_through_pipes():
    proc = pipe(["decompose", "adder_circ", "--gateset", "toffoli"], ["simulate", "-", "--sim", "classical", "--inputs", "110"])
    assert proc.returncode == 0 and proc.stdout == "01\n"
    proc = pipe(["decompose", "adder_circ"], ["simulate", "-", "--inputs", "110"])
    assert proc.returncode == 0 and proc.stdout == "01\n"


def test_compile_file(capsys, tmp_path):
    path = tmp_path / "adder.bool"
    path.write_text("# sum then carry\nx0 ^ x1 ^ x2\n(x0 & x1) | (x0 & x2) | (x1 & x2)  -- majority\n")
    code, out, _ = run(capsys, "compile", str(path))
    assert code == 0
    circuit_file = tmp_path / "adder.qc"
    circuit_file.write_text(out)
    assert run(capsys, "simulate", str(circuit_file), "--sim", "classical", "--inputs", "110")[1] == "01\n"
    circuit_file.write_text(run(capsys, "compile", str(path), "--reversible")[1])
    out = run(capsys, "simulate", str(circuit_file), "--sim", "classical", "--inputs", "11000")[1]
    assert out == "11001\n"


def test_read_boolexprs_skips_comments():
    assert len(read_boolexprs("-- header\n\nx0\n x1 & x0 # note\n")) == 2


@pytest.mark.parametrize(
    "argv, code",
    [
        (["print", "no_such_example"], 2),
        (["simulate", "teleport", "--inputs", "2"], 2),
        (["simulate", "teleport", "--inputs", "11"], 2),
        (["simulate", "teleport", "--runs", "0", "--inputs", "1"], 2),
        (["simulate", "qft", "--sim", "classical", "--inputs", "000"], 2),
        (["simulate", "qft", "--sim", "stabilizer", "--inputs", "000"], 2),
    ],
)
def test_error_exit_codes(capsys, argv, code):
    got, _, err = run(capsys, *argv)
    assert got == code
    assert err.startswith("quill:")


def test_parse_error_exit_code(capsys, tmp_path):
    path = tmp_path / "bad.qc"
    path.write_text("Inputs: 0:Qbit\nQGate[H](0)\nOutputs: 0:Qbit\n")
    code, _, err = run(capsys, "parse", str(path))
    assert code == 2 and "line 2" in err


def test_assertion_failure_exit_code(capsys, tmp_path):
    path = tmp_path / "term.qc"
    path.write_text("Inputs: 0:Qbit\nQTerm0(0)\nOutputs:\n")
    code, _, err = run(capsys, "simulate", str(path), "--inputs", "1")
    assert code == 1 and "assertion" in err


def test_broken_pipe_is_quiet():
    proc = subprocess.run(
        f"{sys.executable} -m quill print qft --n 8 | head -n 1",
        shell=True,
        capture_output=True,
        text=True,
    )
    assert proc.stdout == "Inputs: 0:Qbit, 1:Qbit, 2:Qbit, 3:Qbit, 4:Qbit, 5:Qbit, 6:Qbit, 7:Qbit\n"
    assert "Traceback" not in proc.stderr
