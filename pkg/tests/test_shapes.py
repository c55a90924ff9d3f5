from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from quill.builder import extract
from quill.errors import ShapeMismatch
from quill.shapes import (
    describe,
    leaves,
    map_binary,
    map_leaves,
    parse_shape,
    qc_false,
    rebuild,
    same_shape,
)
from quill.wires import Bit, Qubit

shapes = st.recursive(
    st.just(Qubit),
    lambda inner: st.one_of(
        st.lists(inner, min_size=1, max_size=3).map(tuple),
        st.tuples(inner, st.integers(1, 3)).map(lambda p: [p[0]] * p[1]),
    ),
    max_leaves=8,
)


def test_qc_false():
    assert qc_false((Qubit, [Qubit, Qubit])) == (False, [False, False])


def test_rebuild_refills_depth_first():
    assert rebuild(((0, 0), [0]), "abc") == (("a", "b"), ["c"])
    with pytest.raises(ShapeMismatch):
        rebuild((0,), [1, 2])


def test_same_shape_distinguishes_tuples_and_lists():
    assert same_shape((1, [2]), (3, [4]))
    assert not same_shape((1, 2), [1, 2])
    assert not same_shape([1], [1, 2])


@pytest.mark.parametrize(
    "text, expected",
    [
        ("q", Qubit),
        ("c", Bit),
        ("(q,c)", (Qubit, Bit)),
        ("[q;3]", [Qubit] * 3),
        (" ( [ (q,q) ; 2 ] , q ) ", ([(Qubit, Qubit)] * 2, Qubit)),
        ("[q;0]", []),
    ],
)
def test_parse_shape(text, expected):
    assert parse_shape(text) == expected


@pytest.mark.parametrize("text", ["", "x", "(q", "[q;]", "q q", "(q,)"])
def test_parse_shape_rejects(text):
    with pytest.raises(ValueError):
        parse_shape(text)


def test_map_binary_requires_equal_shapes():
    def program(ctx, xs, ys):
        return map_binary(ctx.controlled_not, xs, ys)

    with pytest.raises(ShapeMismatch):
        extract(program, (Qubit, Qubit), [Qubit, Qubit])


def test_qinit_rejects_mixed_leaves():
    with pytest.raises(ShapeMismatch):
        extract(lambda ctx: ctx.qinit((False, 1.5)))


def _literal(shape) -> str:
    if isinstance(shape, tuple):
        return "(" + ",".join(_literal(s) for s in shape) + ")"
    if isinstance(shape, list):
        return f"[{_literal(shape[0])};{len(shape)}]"
    return "q"


@given(shapes)
def test_literal_syntax_round_trips(shape):
    assert parse_shape(_literal(shape)) == shape
    assert describe(parse_shape(_literal(shape))) == describe(shape)
    assert map_leaves(lambda x: x, shape) == shape


@given(shapes)
def test_generic_ops_preserve_shape(shape):
    def program(ctx, xs):
        ys = ctx.qinit(qc_false(xs))
        ys, xs = map_binary(ctx.controlled_not, ys, xs)
        return xs, ys

    c = extract(program, shape)
    n = len(leaves(shape))
    assert len(c.inputs) == n and len(c.outputs) == 2 * n
    measured = extract(lambda ctx, xs: ctx.measure(xs), shape)
    assert len(measured.outputs) == n
