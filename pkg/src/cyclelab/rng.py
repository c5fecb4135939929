"""Seed derivation for reproducible random streams.

Every random choice in the package draws from a ``numpy.random.Generator``
built on PCG64. Child seeds are derived with the splitmix64 finalizer, which
is part of the reproducibility contract and is specified bit-exactly here:

    splitmix64(x):
        x = (x + 0x9E3779B97F4A7C15)            mod 2**64
        z = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9 mod 2**64
        z = (z ^ (z >> 27)) * 0x94D049BB133111EB mod 2**64
        return z ^ (z >> 31)

    derive(seed, index) = splitmix64(seed ^ splitmix64(index))

``RngStream(seed, index)`` owns ``derive(seed, index)``; ``stream.child(j)``
is ``RngStream(derive(seed, index), j)``. The generator for a stream is
``Generator(PCG64(derive(seed, index)))``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

MASK64 = (1 << 64) - 1


def splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & MASK64
    z = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def derive(seed: int, index: int) -> int:
    return splitmix64((seed & MASK64) ^ splitmix64(index & MASK64))


@dataclass(frozen=True)
class RngStream:
    seed: int
    index: int = 0

    @property
    def key(self) -> int:
        return derive(self.seed, self.index)

    def child(self, j: int) -> "RngStream":
        return RngStream(self.key, j)

    def generator(self) -> np.random.Generator:
        return np.random.Generator(np.random.PCG64(self.key))


def as_generator(rng) -> np.random.Generator:
    """Accept a Generator, an RngStream, an int seed or None (seed 0)."""
    if isinstance(rng, np.random.Generator):
        return rng
    if isinstance(rng, RngStream):
        return rng.generator()
    if rng is None:
        rng = 0
    return RngStream(int(rng)).generator()
