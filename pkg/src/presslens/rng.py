"""Portable deterministic PRNG so samples reproduce across platforms and languages.

The generator is xorshift64* (Vigna 2016): a 64-bit xorshift step followed by a
multiplicative scramble. The state is seeded through one splitmix64 round so
any 64-bit seed (including 0) is valid. Integer draws use rejection sampling,
so results are exactly reproducible from the documented algorithm alone.
"""

from __future__ import annotations

from typing import Sequence, TypeVar

_MASK = (1 << 64) - 1
_MULT = 0x2545F4914F6CDD1D
_SPLITMIX_GAMMA = 0x9E3779B97F4A7C15

T = TypeVar("T")


def _splitmix64(x: int) -> int:
    x = (x + _SPLITMIX_GAMMA) & _MASK
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK
    return x ^ (x >> 31)


class Xorshift64Star:
    """xorshift64* stream over a splitmix64-expanded seed."""

    def __init__(self, seed: int):
        state = _splitmix64(seed & _MASK)
        self._state = state if state != 0 else _SPLITMIX_GAMMA

    def next_u64(self) -> int:
        x = self._state
        x ^= (x >> 12)
        x = (x ^ (x << 25)) & _MASK
        x ^= (x >> 27)
        self._state = x
        return (x * _MULT) & _MASK

    def randbelow(self, n: int) -> int:
        """Uniform integer in [0, n) via rejection sampling (no modulo bias)."""
        if n <= 0:
            raise ValueError("randbelow requires n >= 1")
        limit = (1 << 64) - ((1 << 64) % n)
        while True:
            draw = self.next_u64()
            if draw < limit:
                return draw % n

    def choice(self, seq: Sequence[T]) -> T:
        if not seq:
            raise ValueError("cannot choose from an empty sequence")
        return seq[self.randbelow(len(seq))]

    def shuffle(self, items: list) -> None:
        """In-place Fisher-Yates, iterating from the last index down."""
        for i in range(len(items) - 1, 0, -1):
            j = self.randbelow(i + 1)
            items[i], items[j] = items[j], items[i]

    def sample(self, seq: Sequence[T], k: int) -> list[T]:
        """k distinct items via a partial Fisher-Yates over a copy of seq."""
        n = len(seq)
        if not 0 <= k <= n:
            raise ValueError(f"cannot sample {k} items from {n}")
        pool = list(seq)
        for i in range(k):
            j = i + self.randbelow(n - i)
            pool[i], pool[j] = pool[j], pool[i]
        return pool[:k]
