"""Stabilizer-tableau simulation of Clifford circuits.

The tableau is stored column-wise: for qubit slot ``j`` the integers
``x[j]`` and ``z[j]`` hold, as bit masks over rows, the X and Z parts of
every generator on that qubit, and ``r`` holds the sign bits.  Rows are
interleaved: row ``2i`` is destabilizer ``i`` and row ``2i + 1`` is
stabilizer ``i``.  A gate on one or two qubits is then a handful of integer
operations regardless of the number of qubits, and multiplying one row into
many rows at once is done bit-parallel with a two-bit phase counter.

Freed slots are returned to ``|0>`` and reused by later allocations.
"""

from __future__ import annotations

from ..circuit import Named, RGate
from ..errors import AssertionFailed, NotClifford

_STAB_ROWS_CACHE: dict[int, int] = {}


def _stab_rows(n: int) -> int:
    """Mask with the bit of every stabilizer row set."""
    m = _STAB_ROWS_CACHE.get(n)
    if m is None:
        m = int("10" * n, 2) if n else 0
        _STAB_ROWS_CACHE[n] = m
    return m


class Tableau:
    def __init__(self):
        self.x: list[int] = []
        self.z: list[int] = []
        self.r = 0
        self.n = 0

    def add_qubit(self) -> int:
        j = self.n
        self.x.append(1 << (2 * j))
        self.z.append(1 << (2 * j + 1))
        self.n += 1
        return j

    # Clifford generators --------------------------------------------------

    def h(self, j: int) -> None:
        x, z = self.x[j], self.z[j]
        self.r ^= x & z
        self.x[j], self.z[j] = z, x

    def s(self, j: int) -> None:
        x = self.x[j]
        self.r ^= x & self.z[j]
        self.z[j] ^= x

    def s_dag(self, j: int) -> None:
        x = self.x[j]
        self.z[j] ^= x
        self.r ^= x & self.z[j]

    def px(self, j: int) -> None:
        self.r ^= self.z[j]

    def pz(self, j: int) -> None:
        self.r ^= self.x[j]

    def py(self, j: int) -> None:
        self.r ^= self.x[j] ^ self.z[j]

    def cnot(self, c: int, t: int) -> None:
        x, z = self.x, self.z
        xc, zt = x[c], z[t]
        self.r ^= xc & zt & ~(x[t] ^ z[c])
        x[t] ^= xc
        z[c] ^= zt

    def cz(self, c: int, t: int) -> None:
        self.h(t)
        self.cnot(c, t)
        self.h(t)

    # rows -----------------------------------------------------------------

    def _row(self, i: int) -> tuple[int, int, int]:
        """Row ``i`` as (X mask over qubits, Z mask over qubits, sign bit)."""
        xs = zs = 0
        for j in range(self.n):
            if self.x[j] >> i & 1:
                xs |= 1 << j
            if self.z[j] >> i & 1:
                zs |= 1 << j
        return xs, zs, self.r >> i & 1

    def _multiply_into(self, targets: int, i: int) -> None:
        """Replace every row in the mask ``targets`` by (that row) * (row i)."""
        lo = hi = 0
        x, z = self.x, self.z
        for j in range(self.n):
            xi = x[j] >> i & 1
            zi = z[j] >> i & 1
            if not (xi or zi):
                continue
            xh, zh = x[j] & targets, z[j] & targets
            if xi and zi:
                plus, minus = zh & ~xh, xh & ~zh
            elif xi:
                plus, minus = xh & zh, zh & ~xh
            else:
                plus, minus = xh & ~zh, xh & zh
            # two-bit counter per row: add 1 on plus, subtract 1 on minus
            carry = lo & plus
            lo ^= plus
            hi ^= carry
            borrow = ~lo & minus
            lo ^= minus
            hi ^= borrow
            if xi:
                x[j] ^= targets
            if zi:
                z[j] ^= targets
        ri = -(self.r >> i & 1) & targets
        self.r ^= (hi ^ ri) & targets

    def measure(self, a: int, coin) -> bool:
        """Measure qubit ``a`` in the Z basis; ``coin()`` decides a random outcome."""
        xa = self.x[a]
        stab = _stab_rows(self.n)
        hits = xa & stab
        if hits:
            p = (hits & -hits).bit_length() - 1
            others = xa & ~(1 << p)
            if others:
                self._multiply_into(others, p)
            # destabilizer p-1 takes the old stabilizer row p
            d = p - 1
            dbit, pbit = 1 << d, 1 << p
            for j in range(self.n):
                xj, zj = self.x[j], self.z[j]
                xj = (xj & ~dbit) | (dbit if xj & pbit else 0)
                zj = (zj & ~dbit) | (dbit if zj & pbit else 0)
                self.x[j] = (xj & ~pbit)
                self.z[j] = (zj & ~pbit) | (pbit if j == a else 0)
            self.r = (self.r & ~dbit) | (dbit if self.r & pbit else 0)
            outcome = bool(coin())
            self.r = (self.r & ~pbit) | (pbit if outcome else 0)
            return outcome
        # deterministic: multiply the stabilizers paired with destabilizers
        # that anticommute with Z_a
        sx = sz = 0
        phase = 0
        for i in range(self.n):
            if xa >> (2 * i) & 1:
                rx, rz, rr = self._row(2 * i + 1)
                phase = (phase + 2 * rr + _product_phase(sx, sz, rx, rz)) % 4
                sx ^= rx
                sz ^= rz
        return phase == 2

    def reset(self, a: int, coin) -> bool:
        """Measure slot ``a`` and flip it back to ``|0>``; returns the outcome."""
        v = self.measure(a, coin)
        if v:
            self.px(a)
        return v

    def is_random(self, a: int) -> bool:
        return bool(self.x[a] & _stab_rows(self.n))


def _product_phase(x1: int, z1: int, x2: int, z2: int) -> int:
    """Exponent k (mod 4) of i**k in (P1)(P2) beyond the sign bits."""
    y = x1 & z1
    xo = x1 & ~z1
    zo = z1 & ~x1
    plus = (y & z2 & ~x2) | (xo & x2 & z2) | (zo & x2 & ~z2)
    minus = (y & x2 & ~z2) | (xo & z2 & ~x2) | (zo & x2 & z2)
    return (plus.bit_count() - minus.bit_count()) % 4


class StabilizerBackend:
    def __init__(self, rng):
        self.rng = rng
        self.tab = Tableau()
        self.slot: dict[int, int] = {}
        self.free: list[int] = []

    def init_q(self, w: int, value: bool) -> None:
        j = self.free.pop() if self.free else self.tab.add_qubit()
        self.slot[w] = j
        if value:
            self.tab.px(j)

    def term_q(self, w: int, value: bool) -> None:
        j = self.slot.pop(w)
        if self.tab.is_random(j):
            self.free.append(j)
            self.tab.reset(j, self.rng.bit)
            raise AssertionFailed(f"qubit terminated asserting {int(value)} is not in a basis state")
        got = self.tab.reset(j, None)
        self.free.append(j)
        if got != value:
            raise AssertionFailed(f"qubit terminated asserting {int(value)} holds {int(got)}")

    def measure(self, w: int) -> bool:
        # One uniform draw per measurement, compared with P(1) exactly as the
        # vector simulator does, so equal seeds give equal outcomes.
        u = self.rng.random()
        j = self.slot.pop(w)
        v = self.tab.reset(j, lambda: u < 0.5)
        self.free.append(j)
        return v

    def unitary(self, g, target: int, controls) -> None:
        tab = self.tab
        t = self.slot[target]
        kind = g.kind
        if type(kind) is RGate:
            if kind.m > 2:
                raise NotClifford(f"QRot[{kind.m}] is not a Clifford gate")
            name = "Z" if kind.m == 1 else "S"
        else:
            name = kind.name
        if name == "T":
            raise NotClifford("T is not a Clifford gate")
        if len(controls) > 1:
            raise NotClifford(f"{name} with {len(controls)} quantum controls is not a Clifford gate")
        if controls:
            (cw, positive), = controls
            c = self.slot[cw]
            if not positive:
                tab.px(c)
            if name == "X":
                tab.cnot(c, t)
            elif name == "Z":
                tab.cz(c, t)
            elif name == "Y":
                tab.s_dag(t)
                tab.cnot(c, t)
                tab.s(t)
            else:
                raise NotClifford(f"controlled {name} is not a Clifford gate")
            if not positive:
                tab.px(c)
            return
        if name == "H":
            tab.h(t)
        elif name == "X":
            tab.px(t)
        elif name == "Z":
            tab.pz(t)
        elif name == "Y":
            tab.py(t)
        elif name == "S":
            if g.inverted:
                tab.s_dag(t)
            else:
                tab.s(t)
        else:
            raise NotClifford(f"{name} is not a Clifford gate")
