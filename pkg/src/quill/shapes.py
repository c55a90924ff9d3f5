"""Shape-generic data: nested tuples and lists whose leaves are all
booleans, all :class:`Bit` handles, or all :class:`Qubit` handles.

Python tuples and lists play the role of the tuple and list constructors;
anything else is a leaf.  Traversal is always depth-first, left to right.
"""

from __future__ import annotations

import re
from collections.abc import Callable, Iterator
from typing import Any

from .errors import ShapeMismatch
from .wires import Bit, Qubit


def is_node(x) -> bool:
    return isinstance(x, (tuple, list))


def leaves(x) -> list:
    out: list = []

    def walk(y):
        if is_node(y):
            for z in y:
                walk(z)
        else:
            out.append(y)

    walk(x)
    return out


def map_leaves(f: Callable[[Any], Any], x):
    if isinstance(x, tuple):
        return tuple(map_leaves(f, y) for y in x)
    if isinstance(x, list):
        return [map_leaves(f, y) for y in x]
    return f(x)


def rebuild(template, values) -> Any:
    """Refill the leaves of ``template`` (depth-first) from ``values``."""
    it: Iterator = iter(values)
    out = map_leaves(lambda _: next(it), template)
    for _ in it:
        raise ShapeMismatch("more values than leaves in the shape")
    return out


def shape_of(x):
    """``x`` with every leaf replaced by ``None``."""
    return map_leaves(lambda _: None, x)


def same_shape(x, y) -> bool:
    if isinstance(x, tuple) or isinstance(x, list):
        return type(x) is type(y) and len(x) == len(y) and all(same_shape(a, b) for a, b in zip(x, y))
    return not is_node(y)


def leaf_type(x) -> type | None:
    """The common leaf type (bool, Bit or Qubit), ``None`` for a leafless shape."""
    types = {_leaf_class(v) for v in leaves(x)}
    if len(types) > 1:
        raise ShapeMismatch(f"mixed leaf types in one shape: {sorted(t.__name__ for t in types)}")
    return types.pop() if types else None


def _leaf_class(v):
    if isinstance(v, bool):
        return bool
    if isinstance(v, (Qubit, Bit)):
        return type(v)
    if v is Qubit or v is Bit:
        return v
    raise ShapeMismatch(f"{v!r} is not a shape leaf")


def require_leaves(x, cls, what: str) -> None:
    t = leaf_type(x)
    if t is not None and t is not cls:
        raise ShapeMismatch(f"{what} expects {cls.__name__} leaves, got {t.__name__}")


def _check_same(xs, ys):
    if not same_shape(xs, ys):
        raise ShapeMismatch(f"shapes differ: {describe(xs)} vs {describe(ys)}")


def qc_false(x):
    """A boolean structure of the same shape with every leaf ``False``."""
    return map_leaves(lambda _: False, x)


def map_unary(f: Callable[[Qubit], Qubit], xs):
    return map_leaves(f, xs)


def map_binary(f: Callable[[Qubit, Qubit], tuple], xs, ys):
    """Apply ``f`` to corresponding leaves of two equally shaped structures."""
    _check_same(xs, ys)
    pairs = [f(x, y) for x, y in zip(leaves(xs), leaves(ys))]
    return rebuild(xs, (p[0] for p in pairs)), rebuild(ys, [p[1] for p in pairs])


def map_binary_c(f: Callable[[Qubit, Bit], tuple], xs, ys):
    """:func:`map_binary` where the second structure holds classical bits."""
    require_leaves(xs, Qubit, "map_binary_c")
    require_leaves(ys, Bit, "map_binary_c")
    return map_binary(f, xs, ys)


def qinit_shape(ctx, b):
    return ctx.qinit(b)


def measure_shape(ctx, xs):
    return ctx.measure(xs)


def cdiscard_shape(ctx, xs) -> None:
    ctx.cdiscard(xs)


# ---------------------------------------------------------- literal syntax

_TOKEN = re.compile(r"\s*(?:(\d+)|([qc])|(.))")


def parse_shape(text: str):
    """Parse ``q``, ``c``, ``(s1,s2,...)`` and ``[s;n]`` into a template whose
    leaves are the :class:`Qubit` / :class:`Bit` classes."""
    toks = [(m.group(1), m.group(2), m.group(3)) for m in _TOKEN.finditer(text) if m.group(0).strip()]
    pos = 0

    def peek():
        return toks[pos] if pos < len(toks) else (None, None, None)

    def expect(ch):
        nonlocal pos
        if peek()[2] != ch:
            raise ValueError(f"bad shape {text!r}: expected {ch!r} at token {pos}")
        pos += 1

    def node():
        nonlocal pos
        num, leaf, punct = peek()
        if leaf:
            pos += 1
            return Qubit if leaf == "q" else Bit
        if punct == "(":
            pos += 1
            items = [node()]
            while peek()[2] == ",":
                pos += 1
                items.append(node())
            expect(")")
            return tuple(items)
        if punct == "[":
            pos += 1
            item = node()
            expect(";")
            n = peek()[0]
            if n is None:
                raise ValueError(f"bad shape {text!r}: expected a list length")
            pos += 1
            expect("]")
            return [item] * int(n)
        raise ValueError(f"bad shape {text!r}: unexpected token at {pos}")

    out = node()
    if pos != len(toks):
        raise ValueError(f"bad shape {text!r}: trailing input")
    return out


def describe(x) -> str:
    """Render a shape in the literal syntax (lists are spelled out)."""
    if isinstance(x, tuple):
        return "(" + ",".join(describe(y) for y in x) + ")"
    if isinstance(x, list):
        return "[" + ",".join(describe(y) for y in x) + "]"
    if x is Bit or isinstance(x, Bit):
        return "c"
    if isinstance(x, bool):
        return "T" if x else "F"
    return "q"
