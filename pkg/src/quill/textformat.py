"""Line-oriented text serialization of circuits.

Document layout::

    Subroutine: "QFT"          -- zero or more of these, each followed by a body
    Inputs: 0:Qbit, 1:Qbit
    QRot[2](1) with controls=[+0]
    ...
    Outputs: 0:Qbit, 1:Qbit
    Inputs: 0:Qbit, 1:Qbit     -- the main circuit comes last
    Call["QFT",1](0,1) -> (0,1) with inverse
    Outputs: 0:Qbit, 1:Qbit

``--`` starts a comment that runs to the end of the line (outside quoted
strings).  Quoted strings use JSON escaping.
"""

from __future__ import annotations

import json
import re

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
    validate,
)
from .errors import ParseError


def _q(s: str) -> str:
    return json.dumps(s, ensure_ascii=False)


def _ints(ws) -> str:
    return ",".join(str(w) for w in ws)


def _wirelist(ws) -> str:
    return ", ".join(f"{w}:{k.value}" for w, k in ws)


def format_gate(g: Gate) -> str:
    kind = g.kind
    t = type(kind)
    if t is Named:
        head = f"QGate[{_q(kind.name)}]({g.operands[0]})"
    elif t is RGate:
        head = f"QRot[{kind.m}]({g.operands[0]})"
    elif t in (QInit, QTerm, CInit):
        head = f"{t.__name__}{int(kind.value)}({g.operands[0]})"
    elif t is CDiscard:
        head = f"CDiscard({g.operands[0]})"
    elif t is Measure:
        head = f"QMeas({g.operands[0]})"
    elif t is Comment:
        labels = ",".join(f"{w}:{_q(lab)}" for w, lab in zip(g.operands, kind.labels))
        head = f"Comment[{_q(kind.text)}]({labels})"
    elif t is SubCall:
        head = f"Call[{_q(kind.name)},{kind.repetitions}]({_ints(g.operands)}) -> ({_ints(kind.outputs)})"
    else:
        raise TypeError(f"cannot format gate kind {kind!r}")
    if g.controls:
        head += " with controls=[" + ",".join(f"{'+' if c.positive else '-'}{c.wire}" for c in g.controls) + "]"
    if g.inverted:
        head += " with inverse"
    return head


def _body_lines(c: Circuit, out: list[str]) -> None:
    out.append(("Inputs: " + _wirelist(c.inputs)).rstrip())
    out.extend(format_gate(g) for g in c.gates)
    out.append(("Outputs: " + _wirelist(c.outputs)).rstrip())


def serialize(c: Circuit) -> str:
    lines: list[str] = []
    for name, body in c.subroutines.items():
        lines.append(f"Subroutine: {_q(name)}")
        _body_lines(body, lines)
    _body_lines(c, lines)
    return "\n".join(lines) + "\n"


def _gate_dict(g: Gate) -> dict:
    kind = g.kind
    t = type(kind)
    d: dict = {"gate": t.__name__, "operands": list(g.operands)}
    if t is Named:
        d["name"] = kind.name
    elif t is RGate:
        d["m"] = kind.m
    elif t in (QInit, QTerm, CInit):
        d["value"] = int(kind.value)
    elif t is Comment:
        d["text"] = kind.text
        d["labels"] = list(kind.labels)
    elif t is SubCall:
        d["name"] = kind.name
        d["outputs"] = list(kind.outputs)
        d["repetitions"] = kind.repetitions
    if g.controls:
        d["controls"] = [[c.wire, c.positive] for c in g.controls]
    if g.inverted:
        d["inverted"] = True
    return d


def _body_dict(c: Circuit) -> dict:
    return {
        "inputs": [[w, k.value] for w, k in c.inputs],
        "gates": [_gate_dict(g) for g in c.gates],
        "outputs": [[w, k.value] for w, k in c.outputs],
    }


def to_dict(c: Circuit) -> dict:
    """A JSON-ready description of ``c`` with the same content as the text form."""
    d = _body_dict(c)
    d["subroutines"] = {name: _body_dict(body) for name, body in c.subroutines.items()}
    return d


# -------------------------------------------------------------------- parsing

_STR = r'"(?:[^"\\]|\\.)*"'
_INTS = r"\s*(?:\d+\s*(?:,\s*\d+\s*)*)?"
_COMMENT_RE = re.compile(rf"({_STR})|--.*")
_WIREDECL_RE = re.compile(r"\s*(\d+)\s*:\s*(Qbit|Cbit)\s*$")
_LABEL_RE = re.compile(rf"\s*(\d+)\s*:\s*({_STR})\s*")

_HEADS = [
    ("lifecycle", re.compile(r"(QInit|QTerm|CInit)([01])\(\s*(\d+)\s*\)")),
    ("discard", re.compile(r"CDiscard\(\s*(\d+)\s*\)")),
    ("named", re.compile(rf"QGate\[\s*({_STR})\s*\]\(\s*(\d+)\s*\)")),
    ("rot", re.compile(r"QRot\[\s*(\d+)\s*\]\(\s*(\d+)\s*\)")),
    ("meas", re.compile(r"QMeas\(\s*(\d+)\s*\)")),
    (
        "comment",
        re.compile(rf"Comment\[\s*({_STR})\s*\]\(((?:{_LABEL_RE.pattern}(?:,{_LABEL_RE.pattern})*)?)\)"),
    ),
    ("call", re.compile(rf"Call\[\s*({_STR})\s*,\s*(\d+)\s*\]\(({_INTS})\)\s*->\s*\(({_INTS})\)")),
]
_SUFFIX_RE = re.compile(r"(?:\s+with\s+controls=\[\s*([+-]\d+(?:\s*,\s*[+-]\d+)*)\s*\])?(\s+with\s+inverse)?\s*")
_KINDS = {"Qbit": Q, "Cbit": C}


def _split_ints(s: str) -> tuple[int, ...]:
    s = s.strip()
    return tuple(int(x) for x in s.split(",")) if s else ()


def _unquote(s: str, lineno: int) -> str:
    try:
        return json.loads(s)
    except json.JSONDecodeError as e:
        raise ParseError(lineno, f"bad string literal {s}: {e.msg}") from None


def _parse_wirelist(rest: str, lineno: int):
    rest = rest.strip()
    if not rest:
        return ()
    out = []
    for item in rest.split(","):
        m = _WIREDECL_RE.match(item)
        if not m:
            raise ParseError(lineno, f"expected '<int>:Qbit' or '<int>:Cbit', got {item.strip()!r}")
        out.append((int(m.group(1)), _KINDS[m.group(2)]))
    return tuple(out)


def parse_gate(line: str, lineno: int = 1) -> Gate:
    line = line.strip()
    for tag, rx in _HEADS:
        m = rx.match(line)
        if m:
            break
    else:
        raise ParseError(lineno, f"expected a gate or 'Outputs:', got {line!r}")
    sm = _SUFFIX_RE.fullmatch(line, m.end())
    if sm is None:
        raise ParseError(lineno, f"expected ' with controls=[...]', ' with inverse' or end of line after {m.group(0)!r}")
    controls = ()
    if sm.group(1):
        controls = tuple(Control(int(c.strip()[1:]), c.strip()[0] == "+") for c in sm.group(1).split(","))
    inverted = sm.group(2) is not None

    if tag == "lifecycle":
        cls = {"QInit": QInit, "QTerm": QTerm, "CInit": CInit}[m.group(1)]
        kind, operands = cls(m.group(2) == "1"), (int(m.group(3)),)
    elif tag == "discard":
        kind, operands = CDiscard(), (int(m.group(1)),)
    elif tag == "named":
        kind, operands = Named(_unquote(m.group(1), lineno)), (int(m.group(2)),)
    elif tag == "rot":
        kind, operands = RGate(int(m.group(1))), (int(m.group(2)),)
    elif tag == "meas":
        kind, operands = Measure(), (int(m.group(1)),)
    elif tag == "comment":
        pairs = [(int(w), _unquote(s, lineno)) for w, s in _LABEL_RE.findall(m.group(2))]
        kind = Comment(_unquote(m.group(1), lineno), tuple(lab for _, lab in pairs))
        operands = tuple(w for w, _ in pairs)
    else:
        kind = SubCall(_unquote(m.group(1), lineno), _split_ints(m.group(4)), int(m.group(2)))
        operands = _split_ints(m.group(3))
    return Gate(kind, operands, controls, inverted)


def parse(text: str, *, check: bool = True) -> Circuit:
    """Parse a document produced by :func:`serialize`.

    With ``check`` (the default) the result is also run through
    :func:`~quill.circuit.validate`, so semantic problems surface as
    :class:`~quill.errors.ValidityError`.
    """
    lines = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        stripped = _COMMENT_RE.sub(lambda m: m.group(1) or "", raw).strip()
        if stripped:
            lines.append((lineno, stripped))

    subroutines: dict[str, Circuit] = {}
    pos = 0

    def body(lineno_hint):
        nonlocal pos
        if pos >= len(lines):
            raise ParseError(lineno_hint, "expected 'Inputs:', got end of input")
        lineno, line = lines[pos]
        if not line.startswith("Inputs:"):
            raise ParseError(lineno, f"expected 'Inputs:', got {line!r}")
        inputs = _parse_wirelist(line[len("Inputs:"):], lineno)
        pos += 1
        gates = []
        while True:
            if pos >= len(lines):
                raise ParseError(lineno, "expected 'Outputs:', got end of input")
            lineno, line = lines[pos]
            pos += 1
            if line.startswith("Outputs:"):
                return inputs, gates, _parse_wirelist(line[len("Outputs:"):], lineno)
            gates.append(parse_gate(line, lineno))

    while pos < len(lines) and lines[pos][1].startswith("Subroutine:"):
        lineno, line = lines[pos]
        name_src = line[len("Subroutine:"):].strip()
        if not re.fullmatch(_STR, name_src):
            raise ParseError(lineno, f"expected a quoted subroutine name, got {name_src!r}")
        name = _unquote(name_src, lineno)
        if name in subroutines:
            raise ParseError(lineno, f"subroutine {name!r} defined twice")
        pos += 1
        ins, gates, outs = body(lineno)
        subroutines[name] = Circuit(ins, gates, outs)
    ins, gates, outs = body(lines[-1][0] if lines else 1)
    if pos < len(lines):
        lineno, line = lines[pos]
        raise ParseError(lineno, f"expected end of input after main circuit, got {line!r}")
    c = Circuit(ins, gates, outs, subroutines)
    if check:
        validate(c)
    return c
