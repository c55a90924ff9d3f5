"""Seedable xorshift64* generator.

The algorithm is fixed so seeded simulation runs are reproducible across
platforms and implementations:

* seeding: ``state = splitmix64(seed)``; a zero result is replaced by
  ``0x9E3779B97F4A7C15``
* step: ``x ^= x >> 12; x ^= x << 25; x ^= x >> 27`` (64-bit), output
  ``x * 0x2545F4914F6CDD1D mod 2**64``
* ``random()`` is the top 53 bits of the output divided by ``2**53``
"""

from __future__ import annotations

_MASK = (1 << 64) - 1


def splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & _MASK
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK
    return x ^ (x >> 31)


class Rng:
    __slots__ = ("_state",)

    def __init__(self, seed: int = 0):
        s = splitmix64(seed & _MASK)
        self._state = s or 0x9E3779B97F4A7C15

    def next_u64(self) -> int:
        x = self._state
        x ^= x >> 12
        x ^= (x << 25) & _MASK
        x ^= x >> 27
        self._state = x
        return (x * 0x2545F4914F6CDD1D) & _MASK

    def random(self) -> float:
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))

    def bit(self) -> bool:
        return self.next_u64() >> 63 == 1
