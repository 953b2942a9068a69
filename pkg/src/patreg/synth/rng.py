"""Portable random source for fixtures.

Raw 64-bit outputs come from PCG64 (numpy's bit generator, seeded through
``SeedSequence(seed)``). Everything else is derived here with integer
arithmetic, so a fixture depends only on the PCG64 stream and not on the
numpy version's distribution code:

* ``below(n)``   = ``(u * n) >> 64``
* ``uniform()``  = ``(u >> 11) * 2**-53``
"""

from __future__ import annotations

from typing import Sequence, TypeVar

import numpy as np

T = TypeVar("T")
_MASK64 = (1 << 64) - 1
_BLOCK = 4096


class Rng:
    def __init__(self, seed: int):
        self._bits = np.random.PCG64(seed & _MASK64)
        self._buf: list[int] = []
        self._pos = 0

    def u64(self) -> int:
        if self._pos >= len(self._buf):
            self._buf = self._bits.random_raw(_BLOCK).tolist()
            self._pos = 0
        v = self._buf[self._pos]
        self._pos += 1
        return v

    def below(self, n: int) -> int:
        return (self.u64() * n) >> 64

    def between(self, lo: int, hi: int) -> int:
        """Uniform integer in [lo, hi]."""
        return lo + self.below(hi - lo + 1)

    def uniform(self) -> float:
        return (self.u64() >> 11) * (1.0 / (1 << 53))

    def chance(self, p: float) -> bool:
        return self.uniform() < p

    def choice(self, items: Sequence[T]) -> T:
        return items[self.below(len(items))]

    def sample(self, items: Sequence[T], k: int) -> list[T]:
        """k distinct items, in draw order (partial Fisher-Yates)."""
        pool = list(items)
        k = min(k, len(pool))
        for i in range(k):
            j = i + self.below(len(pool) - i)
            pool[i], pool[j] = pool[j], pool[i]
        return pool[:k]
