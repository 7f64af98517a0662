"""Deterministic random streams.

All randomness in the pipeline flows from one 64-bit master seed. Each object
gets an independent stream whose seed is `splitmix64(master_seed XOR
(object_index + 1) * GAMMA)`, so results do not depend on generation order or
thread scheduling. Streams are built on the Mersenne Twister but restricted to
the two primitives CPython guarantees stable across versions (`random()` and
`getrandbits()`); every higher-level draw is derived from those here.
"""

from __future__ import annotations

import random

MASK64 = 0xFFFFFFFFFFFFFFFF
_GAMMA = 0x9E3779B97F4A7C15  # splitmix64 increment (golden ratio, 64-bit)


def splitmix64(x: int) -> int:
    """One splitmix64 scrambling step (Steele et al. finalizer)."""
    x = (x + _GAMMA) & MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & MASK64
    return (x ^ (x >> 31)) & MASK64


def mix_seed(master_seed: int, index: int) -> int:
    """Derive a per-object 64-bit seed from the master seed and object index."""
    return splitmix64((master_seed & MASK64) ^ ((index + 1) * _GAMMA & MASK64))


class SeededStream:
    """Reproducible random stream with a small, documented draw surface.

    Consumers must draw in a documented fixed order; adding or removing a draw
    changes every downstream value for the same seed (that is intentional --
    identical seeds must mean identical output, nothing weaker).
    """

    def __init__(self, seed: int):
        self.seed = seed & MASK64
        self._r = random.Random(self.seed)

    def random(self) -> float:
        """Uniform float in [0, 1)."""
        return self._r.random()

    def uniform(self, lo: float, hi: float) -> float:
        """Uniform float in [lo, hi)."""
        return lo + (hi - lo) * self._r.random()

    def randint(self, lo: int, hi: int) -> int:
        """Uniform integer in [lo, hi] via rejection on getrandbits."""
        if lo > hi:
            raise ValueError(f"empty integer range [{lo}, {hi}]")
        span = hi - lo + 1
        if span == 1:
            return lo
        bits = span.bit_length()
        while True:
            v = self._r.getrandbits(bits)
            if v < span:
                return lo + v

    def choice(self, seq):
        """Uniform element of a nonempty sequence."""
        if not seq:
            raise IndexError("choice from empty sequence")
        return seq[self.randint(0, len(seq) - 1)]

    def child(self, tag: int) -> "SeededStream":
        """Independent substream identified by an integer tag."""
        return SeededStream(splitmix64(self.seed ^ ((tag + 1) * _GAMMA & MASK64)))


def object_stream(master_seed: int, index: int) -> SeededStream:
    """Stream for the `index`-th object of a run seeded with `master_seed`."""
    return SeededStream(mix_seed(master_seed, index))
