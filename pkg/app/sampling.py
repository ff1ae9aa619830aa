"""Seeded pseudo-random sampling that is identical across platforms."""

from collections.abc import Sequence
from typing import TypeVar

T = TypeVar('T')

MULTIPLIER = 6364136223846793005
INCREMENT = 1442695040888963407
MASK = (1 << 64) - 1


class Lcg:
    """64-bit linear congruential generator emitting the high 32 bits of its state."""

    def __init__(self, seed: int):
        self.state = seed & MASK

    def next_u32(self) -> int:
        self.state = (self.state * MULTIPLIER + INCREMENT) & MASK
        return self.state >> 32

    def below(self, n: int) -> int:
        """Uniform-enough integer in [0, n)."""
        if n <= 0:
            raise ValueError(f"empty range {n}")
        return self.next_u32() % n

    def choice(self, items: Sequence[T]) -> T:
        return items[self.below(len(items))]

    def sample(self, items: Sequence[T], k: int) -> list[T]:
        """k distinct items, in the order drawn (partial Fisher-Yates)."""
        pool = list(items)
        k = min(k, len(pool))
        for i in range(k):
            j = i + self.below(len(pool) - i)
            pool[i], pool[j] = pool[j], pool[i]
        return pool[:k]
