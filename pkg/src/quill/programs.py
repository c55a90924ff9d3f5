"""Example circuit programs: teleportation, the QFT, a QFT-based adder and a
compiled full adder, plus the registry the command line draws on."""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass

from .builder import BuildContext, extract_with_shape
from .ops import ClassicalFunction, Var, classical_to_reversible, compile_classical, reverse_endo
from .shapes import map_binary, map_binary_c, map_unary, parse_shape, qc_false
from .transformers import BINARY, decompose_generic
from .wires import Bit, Qubit

# ------------------------------------------------------------ teleportation


def plus_minus(ctx: BuildContext, b: bool) -> Qubit:
    """|+> for ``False``, |-> for ``True``."""
    q = ctx.qinit(b)
    return ctx.hadamard(q)


def share(ctx: BuildContext, a: Qubit):
    b = ctx.qinit(False)
    b = ctx.qnot(b, controls=a)
    return a, b


def bell00(ctx: BuildContext):
    a = plus_minus(ctx, False)
    return share(ctx, a)


def alice(ctx: BuildContext, q: Qubit, a: Qubit):
    a = ctx.qnot(a, controls=q)
    q = ctx.hadamard(q)
    return ctx.measure((q, a))


def bob(ctx: BuildContext, b: Qubit, xy):
    x, y = xy
    b = ctx.gate_X(b, controls=y)
    b = ctx.gate_Z(b, controls=x)
    ctx.cdiscard((x, y))
    return b


def teleport(ctx: BuildContext, q: Qubit) -> Qubit:
    a, b = bell00(ctx)
    x, y = alice(ctx, q, a)
    return bob(ctx, b, (x, y))


# Shape-generic versions work on any tuple/list structure of qubits.


def plus_minus_generic(ctx: BuildContext, bs):
    qs = ctx.qinit(bs)
    return map_unary(ctx.hadamard, qs)


def share_generic(ctx: BuildContext, qa):
    qb = ctx.qinit(qc_false(qa))
    qb, qa = map_binary(ctx.controlled_not, qb, qa)
    return qa, qb


def bell00_generic(ctx: BuildContext, shape):
    qa = plus_minus_generic(ctx, shape)
    return share_generic(ctx, qa)


def alice_generic(ctx: BuildContext, q, a):
    a, q = map_binary(ctx.controlled_not, a, q)
    q = map_unary(ctx.hadamard, q)
    return ctx.measure((q, a))


def bob_generic(ctx: BuildContext, b, xy):
    x, y = xy

    def controlled_gate(gate):
        def apply(t, c):
            gate(t, controls=c)
            return t, c

        return apply

    b, y = map_binary_c(controlled_gate(ctx.gate_X), b, y)
    b, x = map_binary_c(controlled_gate(ctx.gate_Z), b, x)
    ctx.cdiscard((x, y))
    return b


def teleport_generic(ctx: BuildContext, q):
    a, b = bell00_generic(ctx, qc_false(q))
    x, y = alice_generic(ctx, q, a)
    return bob_generic(ctx, b, (x, y))


def teleport_generic_labeled(ctx: BuildContext, q):
    ctx.comment_with_label("ENTER: bell00", q, "q")
    a, b = bell00_generic(ctx, qc_false(q))
    ctx.comment_with_label("ENTER: alice", (a, b), ("a", "b"))
    x, y = alice_generic(ctx, q, a)
    ctx.comment_with_label("ENTER: bob", (x, y), ("x", "y"))
    return bob_generic(ctx, b, (x, y))


# ---------------------------------------------------------------------- QFT


def rotations(ctx: BuildContext, c: Qubit, qs: list, n: int) -> list:
    if not qs:
        return []
    q, rest = qs[0], qs[1:]
    rest = rotations(ctx, c, rest, n)
    m = (n + 1) - len(rest)
    q = ctx.rgate(m, q, controls=c)
    return [q] + rest


def qft_prime(ctx: BuildContext, qs: list) -> list:
    """QFT taking its register little-endian and returning it big-endian."""
    if not qs:
        return []
    if len(qs) == 1:
        ctx.hadamard(qs[0])
        return list(qs)
    x, xs = qs[0], qs[1:]
    xs = qft_prime(ctx, xs)
    xs = rotations(ctx, x, xs, len(xs))
    x = ctx.hadamard(x)
    return [x] + xs


def qft_big_endian(ctx: BuildContext, qs: list) -> list:
    # An empty register gives an empty circuit, comments included.
    if qs:
        ctx.comment_with_label("ENTER: qft_big_endian", list(qs), "qs")
    qs = qft_prime(ctx, list(reversed(qs)))
    if qs:
        ctx.comment_with_label("EXIT: qft_big_endian", qs, "qs")
    return qs


inverse_qft_big_endian = reverse_endo(qft_big_endian)
inverse_qft_big_endian.__name__ = "inverse_qft_big_endian"


def qft_adder(ctx: BuildContext, as_: list, bs: list) -> None:
    """Add the register ``as_`` into ``bs``, which must be in Fourier space."""
    for k, b in enumerate(bs):
        for n, a in enumerate(as_[k:], start=1):
            ctx.rgate(n, b, controls=a)


def qft_add_in_place(ctx: BuildContext, a: list, b: list):
    """``(a, b) -> (a, a + b mod 2**n)``.

    Registers are read most significant qubit first, the order in which
    :func:`qft_big_endian` expects them.
    """
    ctx.label((a, b), ("a", "b"))
    ctx.with_computed(lambda: qft_big_endian(ctx, b), lambda b2: qft_adder(ctx, a, list(reversed(b2))))
    ctx.label((a, b), ("a", "b"))
    return a, b


def qft_add_in_place_boxed(ctx: BuildContext, a: list, b: list):
    ctx.label((a, b), ("a", "b"))
    ctx.with_computed(
        lambda: ctx.box("QFT", qft_big_endian, b),
        lambda b2: qft_adder(ctx, a, list(reversed(b2))),
    )
    ctx.label((a, b), ("a", "b"))
    return a, b


# ------------------------------------------------------------ classical adder

_a, _b, _cin = Var(0), Var(1), Var(2)
ADDER = ClassicalFunction(3, ((_a ^ _b) ^ _cin, (_a & _b) | (_a & _cin) | (_b & _cin)))
"""(a, b, carry_in) -> (sum, carry_out)."""

adder_circ = compile_classical(ADDER)
adder_circ.__name__ = "adder_circ"
adder_reversible = classical_to_reversible(adder_circ)
adder_circ_b = decompose_generic(BINARY, adder_circ)


# ----------------------------------------------------------------- registry


@dataclass(frozen=True)
class Example:
    program: Callable
    arguments: Callable[[int, str], tuple]
    sized: bool = False
    shaped: bool = False


def _register(n: int):
    return [Qubit] * n


EXAMPLES: dict[str, Example] = {
    "plus_minus": Example(plus_minus, lambda n, s: (False,)),
    "share": Example(share, lambda n, s: (Qubit,)),
    "bell00": Example(bell00, lambda n, s: ()),
    "alice": Example(alice, lambda n, s: (Qubit, Qubit)),
    "bob": Example(bob, lambda n, s: (Qubit, (Bit, Bit))),
    "teleport": Example(teleport, lambda n, s: (Qubit,)),
    "teleport_generic": Example(teleport_generic, lambda n, s: (parse_shape(s),), shaped=True),
    "qft": Example(qft_big_endian, lambda n, s: (_register(n),), sized=True),
    "qft_inverse": Example(inverse_qft_big_endian, lambda n, s: (_register(n),), sized=True),
    "qft_add": Example(qft_add_in_place, lambda n, s: (_register(n), _register(n)), sized=True),
    "qft_add_boxed": Example(qft_add_in_place_boxed, lambda n, s: (_register(n), _register(n)), sized=True),
    "adder_circ": Example(adder_circ, lambda n, s: ((Qubit, Qubit, Qubit),)),
    "adder_reversible": Example(adder_reversible, lambda n, s: (((Qubit, Qubit, Qubit), (Qubit, Qubit)),)),
    "adder_binary": Example(adder_circ_b, lambda n, s: ((Qubit, Qubit, Qubit),)),
}


def example_circuit(name: str, n: int = 3, shape: str = "q"):
    """Build a registered example; returns ``(circuit, output_template)``."""
    try:
        ex = EXAMPLES[name]
    except KeyError:
        raise KeyError(f"unknown example {name!r}; choose from {', '.join(EXAMPLES)}") from None
    return extract_with_shape(ex.program, *ex.arguments(n, shape))
