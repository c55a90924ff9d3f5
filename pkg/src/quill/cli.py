"""``quill`` command line: print, parse, simulate, count, decompose and
compile circuits.

A circuit source is either the name of a bundled example, a path to a file
in the text format, or ``-`` for standard input.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
from collections import Counter

from . import textformat
from .builder import extract
from .circuit import Circuit
from .errors import AssertionFailed, ParseError, QuillError
from .ops import ClassicalFunction, classical_to_reversible, compile_classical, max_var, parse_boolexpr
from .programs import EXAMPLES, example_circuit
from .resources import count, flatten
from .shapes import leaves
from .simulators import Rng, sim_classical, sim_stabilizer, sim_vector
from .transformers import decompose
from .wires import Bit, Qubit

SIMULATORS = {"classical": sim_classical, "stabilizer": sim_stabilizer, "vector": sim_vector}

# Programs may leave scratch wires live; they are appended to the circuit
# outputs.  Documents printed for such circuits start with this comment so
# that ``simulate`` can report only the values the program returned.
_RETURNED = re.compile(r"^--\s*returned outputs:\s*(\d+)\s*$", re.M)


class UsageError(Exception):
    pass


def _load(source: str, args) -> tuple[Circuit, int | None]:
    """Return the circuit and, when known, how many outputs were returned
    by the program (the rest being live scratch wires)."""
    if source in EXAMPLES:
        try:
            circuit, template = example_circuit(source, args.n, args.shape)
        except ValueError as e:
            raise UsageError(str(e)) from None
        returned = sum(1 for leaf in leaves(template) if leaf is Qubit or leaf is Bit)
        return circuit, returned
    if source == "-":
        text = sys.stdin.read()
    elif os.path.isfile(source):
        with open(source, encoding="utf-8") as f:
            text = f.read()
    else:
        raise UsageError(f"{source!r} is neither an example ({', '.join(EXAMPLES)}) nor a file")
    m = _RETURNED.search(text)
    return textformat.parse(text), int(m.group(1)) if m else None


def _document(circuit: Circuit, returned: int | None) -> str:
    text = textformat.serialize(circuit)
    if returned is not None and returned != len(circuit.outputs):
        text = f"-- returned outputs: {returned}\n" + text
    return text


def cmd_print(args) -> int:
    circuit, returned = _load(args.source, args)
    if args.format == "json":
        print(json.dumps(textformat.to_dict(circuit), indent=2))
    else:
        sys.stdout.write(_document(circuit, returned))
    return 0


def cmd_parse(args) -> int:
    circuit, returned = _load(args.source, args)
    sys.stdout.write(_document(circuit, returned))
    return 0


def _parse_bits(text: str, n: int) -> list[bool]:
    text = text.strip()
    if any(ch not in "01" for ch in text):
        raise UsageError(f"--inputs must be a string of 0s and 1s, got {text!r}")
    if len(text) != n:
        raise UsageError(f"the circuit has {n} inputs, --inputs gives {len(text)}")
    return [ch == "1" for ch in text]


def cmd_simulate(args) -> int:
    circuit, returned = _load(args.source, args)
    inputs = _parse_bits(args.inputs, len(circuit.inputs))
    if args.runs < 1:
        raise UsageError("--runs must be at least 1")
    simulate = SIMULATORS[args.sim]
    rng = Rng(args.seed)
    shown = len(circuit.outputs) if returned is None else returned
    freq: Counter = Counter()
    for _ in range(args.runs):
        if args.sim == "classical":
            out = simulate(circuit, inputs)
        else:
            out = simulate(circuit, inputs, rng)
        line = "".join("1" if v else "0" for v in out[:shown])
        freq[line] += 1
        print(line)
    if args.runs > 1:
        print("frequencies:")
        for bits, k in sorted(freq.items()):
            print(f"{bits or '(none)'}  {k}  {k / args.runs:.4f}")
    return 0


def cmd_count(args) -> int:
    circuit, _ = _load(args.source, args)
    if args.flatten:
        circuit = flatten(circuit)
    report = count(circuit)
    print(report.to_json() if args.json else report.table())
    return 0


def cmd_decompose(args) -> int:
    circuit, returned = _load(args.source, args)
    sys.stdout.write(_document(decompose(circuit, args.gateset), returned))
    return 0


def read_boolexprs(text: str) -> list:
    exprs = []
    for raw in text.splitlines():
        line = raw.split("--", 1)[0].split("#", 1)[0].strip()
        if line:
            exprs.append(parse_boolexpr(line))
    if not exprs:
        raise UsageError("no expressions found")
    return exprs


def cmd_compile(args) -> int:
    if args.file == "-":
        text = sys.stdin.read()
    else:
        with open(args.file, encoding="utf-8") as f:
            text = f.read()
    try:
        exprs = read_boolexprs(text)
    except ValueError as e:
        raise UsageError(str(e)) from None
    arity = args.arity if args.arity is not None else max(max(max_var(e) for e in exprs) + 1, 1)
    try:
        f = ClassicalFunction(arity, exprs)
    except ValueError as e:
        raise UsageError(str(e)) from None
    program = compile_classical(f)
    xs = tuple([Qubit] * arity)
    if args.reversible:
        circuit = extract(classical_to_reversible(program), (xs, tuple([Qubit] * len(exprs))))
        returned = None
    else:
        circuit = extract(program, xs)
        returned = len(exprs)
    sys.stdout.write(_document(circuit, returned))
    return 0


def _default_seed() -> int:
    raw = os.environ.get("QUILL_SEED")
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise SystemExit(f"quill: QUILL_SEED must be an integer, got {raw!r}") from None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="quill", description=__doc__.split("\n\n")[0])
    sub = p.add_subparsers(dest="command", required=True)

    def source_cmd(name, func, help_text):
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("source", help="example name, circuit file, or - for stdin")
        sp.add_argument("--n", type=int, default=3, help="register size for sized examples (default 3)")
        sp.add_argument("--shape", default="q", help="shape for teleport_generic, e.g. '(q,q)' or '[q;3]'")
        sp.set_defaults(func=func)
        return sp

    sp = source_cmd("print", cmd_print, "print a circuit")
    sp.add_argument("--format", choices=("text", "json"), default="text")

    source_cmd("parse", cmd_parse, "check a circuit document and print it normalized")

    sp = source_cmd("simulate", cmd_simulate, "run a circuit on a simulator")
    sp.add_argument("--sim", choices=tuple(SIMULATORS), default="vector")
    sp.add_argument("--seed", type=int, default=_default_seed())
    sp.add_argument("--runs", type=int, default=1)
    sp.add_argument("--inputs", default="", help="one 0/1 per input wire")

    sp = source_cmd("count", cmd_count, "count gates, width and ancillas")
    sp.add_argument("--flatten", action="store_true", help="inline subroutines before counting")
    sp.add_argument("--json", action="store_true")

    sp = source_cmd("decompose", cmd_decompose, "rewrite into a smaller gate set")
    sp.add_argument("--gateset", choices=("binary", "toffoli"), default="binary")

    sp = sub.add_parser("compile", help="compile boolean expressions (one output per line)")
    sp.add_argument("file", help="expression file, or - for stdin")
    sp.add_argument("--arity", type=int, help="number of inputs (default: highest variable + 1)")
    sp.add_argument("--reversible", action="store_true", help="emit (x, y) -> (x, y xor f(x))")
    sp.set_defaults(func=cmd_compile)
    return p


def main(argv=None) -> int:
    try:
        sys.stdout.reconfigure(encoding="utf-8", line_buffering=True)
    except (AttributeError, ValueError):
        pass
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BrokenPipeError:
        # the reader went away (e.g. ``| head``); silence the final flush
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        return 0
    except AssertionFailed as e:
        print(f"quill: assertion failed: {e}", file=sys.stderr)
        return 1
    except (UsageError, ParseError, OSError, KeyError) as e:
        print(f"quill: {e}", file=sys.stderr)
        return 2
    except QuillError as e:
        print(f"quill: {type(e).__name__}: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
