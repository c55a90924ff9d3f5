"""Circuit-level combinators and classical-to-quantum compilation."""

from __future__ import annotations

import re
from collections.abc import Callable, Sequence
from dataclasses import dataclass

from .builder import BuildContext, _marker
from .circuit import reverse
from .errors import NotEndomorphic, ShapeMismatch
from .shapes import describe, is_node, leaves, map_leaves, rebuild, same_shape


def with_computed(ctx: BuildContext, compute: Callable, body: Callable):
    return ctx.with_computed(compute, body)


def box(ctx: BuildContext, name: str, func: Callable, *args, repetitions: int = 1):
    return ctx.box(name, func, *args, repetitions=repetitions)


def _same_markers(a, b) -> bool:
    if is_node(a):
        return same_shape(a, b) and all(_same_markers(x, y) for x, y in zip(a, b))
    return a is b


def reverse_endo(func: Callable) -> Callable:
    """The inverse of a circuit function whose output shape equals its input shape.

    ``func`` is generated on the shape of the arguments it is eventually
    called with, reversed, and inlined.
    """

    def reversed_func(ctx: BuildContext, *args):
        template = map_leaves(_marker, list(args))
        sub = ctx.child()
        sub_args = sub.inputs_like(template)
        result = func(sub, *sub_args)
        expected = template[0] if len(template) == 1 else tuple(template)
        got = map_leaves(_marker, result)
        if not _same_markers(got, expected):
            raise NotEndomorphic(f"output shape {describe(got)} differs from input shape {describe(expected)}")
        try:
            circuit = sub.finish(result, allow_garbage=False)
        except Exception as e:
            raise NotEndomorphic(str(e)) from e
        outs = ctx.emit_circuit(reverse(circuit), args)
        restored = rebuild(template, outs)
        return restored[0] if len(args) == 1 else tuple(restored)

    reversed_func.__name__ = f"reverse_{getattr(func, '__name__', 'func')}"
    return reversed_func


# ------------------------------------------------------- boolean expressions


class BoolExpr:
    def __invert__(self):
        return Not(self)

    def __and__(self, other):
        return And(self, other)

    def __or__(self, other):
        return Or(self, other)

    def __xor__(self, other):
        return Xor(self, other)


@dataclass(frozen=True)
class Var(BoolExpr):
    index: int

    def eval(self, bits):
        return bool(bits[self.index])


@dataclass(frozen=True)
class Const(BoolExpr):
    value: bool

    def eval(self, bits):
        return self.value


@dataclass(frozen=True)
class Not(BoolExpr):
    arg: BoolExpr

    def eval(self, bits):
        return not self.arg.eval(bits)


@dataclass(frozen=True)
class And(BoolExpr):
    left: BoolExpr
    right: BoolExpr

    def eval(self, bits):
        return self.left.eval(bits) and self.right.eval(bits)


@dataclass(frozen=True)
class Or(BoolExpr):
    left: BoolExpr
    right: BoolExpr

    def eval(self, bits):
        return self.left.eval(bits) or self.right.eval(bits)


@dataclass(frozen=True)
class Xor(BoolExpr):
    left: BoolExpr
    right: BoolExpr

    def eval(self, bits):
        return self.left.eval(bits) != self.right.eval(bits)


def max_var(e: BoolExpr) -> int:
    if isinstance(e, Var):
        return e.index
    if isinstance(e, Const):
        return -1
    if isinstance(e, Not):
        return max_var(e.arg)
    return max(max_var(e.left), max_var(e.right))


@dataclass(frozen=True)
class ClassicalFunction:
    """A boolean function of ``arity`` inputs given by one expression per output."""

    arity: int
    outputs: tuple[BoolExpr, ...]

    def __post_init__(self):
        object.__setattr__(self, "outputs", tuple(self.outputs))
        for e in self.outputs:
            if max_var(e) >= self.arity:
                raise ValueError(f"expression uses x{max_var(e)} but arity is {self.arity}")

    def __call__(self, bits: Sequence[bool]) -> tuple[bool, ...]:
        if len(bits) != self.arity:
            raise ValueError(f"expected {self.arity} inputs, got {len(bits)}")
        return tuple(e.eval(bits) for e in self.outputs)


_BTOKEN = re.compile(r"\s*(?:x(\d+)|([01])|([!&^|()]))")


def parse_boolexpr(text: str) -> BoolExpr:
    """Parse ``x0 ^ x1 & !x2 | (x0 & x1)``; binding strength ``! > & > ^ > |``."""
    toks = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _BTOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"unexpected character at {pos} in {text!r}")
        toks.append(("var", int(m.group(1))) if m.group(1) else ("const", m.group(2) == "1") if m.group(2) else (m.group(3), None))
        pos = m.end()
        while pos < len(text) and text[pos].isspace():
            pos += 1
    i = 0

    def peek():
        return toks[i][0] if i < len(toks) else None

    def binary(op, cls, sub):
        nonlocal i
        left = sub()
        while peek() == op:
            i += 1
            left = cls(left, sub())
        return left

    def atom():
        nonlocal i
        tag = peek()
        if tag is None:
            raise ValueError(f"unexpected end of expression {text!r}")
        tok = toks[i]
        i += 1
        if tag == "var":
            return Var(tok[1])
        if tag == "const":
            return Const(tok[1])
        if tag == "!":
            return Not(atom())
        if tag == "(":
            e = ors()
            if peek() != ")":
                raise ValueError(f"missing ')' in {text!r}")
            i += 1
            return e
        raise ValueError(f"unexpected {tag!r} in {text!r}")

    def ands():
        return binary("&", And, atom)

    def xors():
        return binary("^", Xor, ands)

    def ors():
        return binary("|", Or, xors)

    e = ors()
    if i != len(toks):
        raise ValueError(f"trailing input in {text!r}")
    return e


def compile_classical(f: ClassicalFunction) -> Callable:
    """A circuit function computing ``f`` into fresh ancillas.

    The returned function takes a tuple of ``f.arity`` qubits and returns a
    tuple of output qubits.  Intermediate ancillas are left live.
    """

    def circuit(ctx: BuildContext, xs):
        xs = leaves(xs)
        if len(xs) != f.arity:
            raise ShapeMismatch(f"expected {f.arity} input qubits, got {len(xs)}")

        def copy(w):
            t = ctx.qinit(False)
            ctx.qnot(t, controls=w)
            return t

        def lower(e):
            if isinstance(e, Var):
                return xs[e.index]
            if isinstance(e, Const):
                return ctx.qinit(e.value)
            if isinstance(e, Not):
                return ctx.qnot(copy(lower(e.arg)))
            a, b = lower(e.left), lower(e.right)
            if isinstance(e, Xor):
                if a == b:
                    return ctx.qinit(False)
                t = ctx.qinit(False)
                ctx.qnot(t, controls=a)
                ctx.qnot(t, controls=b)
                return t
            if a == b:
                return copy(a)
            if isinstance(e, And):
                t = ctx.qinit(False)
                return ctx.qnot(t, controls=[a, b])
            # a | b == !(!a & !b)
            t = ctx.qinit(False)
            ctx.qnot(a)
            ctx.qnot(b)
            ctx.qnot(t, controls=[a, b])
            ctx.qnot(a)
            ctx.qnot(b)
            return ctx.qnot(t)

        outs = []
        for e in f.outputs:
            w = lower(e)
            if w in outs:
                w = copy(w)
            outs.append(w)
        return tuple(outs)

    circuit.__name__ = "compiled"
    return circuit


def classical_to_reversible(func: Callable) -> Callable:
    """Turn ``func: a -> b`` into ``(a, b) -> (a, b)`` mapping ``(x, y)`` to
    ``(x, y xor func(x))`` with every ancilla of ``func`` uncomputed."""

    def reversible(ctx: BuildContext, xy):
        x, y = xy

        def accumulate(out):
            if not same_shape(map_leaves(_marker, out), map_leaves(_marker, y)):
                raise ShapeMismatch(f"function output {describe(out)} does not match target {describe(y)}")
            ctx.controlled_not(y, out)

        ctx.with_computed(lambda: func(ctx, x), accumulate)
        return x, y

    reversible.__name__ = f"reversible_{getattr(func, '__name__', 'func')}"
    return reversible
