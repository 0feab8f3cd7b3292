"""SplitMix64 pseudo-random generator.

All randomness in the package goes through this generator so that splits,
initializations, dropout masks and perturbations are reproducible from a
single integer seed, independently of numpy's or Python's generator choices.

SplitMix64 (Steele, Lea & Flood, 2014) keeps a 64-bit counter that advances by
a fixed odd constant; each output is a bijective mix of the counter value::

    state += 0x9E3779B97F4A7C15
    z = state
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB
    return z ^ (z >> 31)

Because the i-th output depends only on ``seed + i * GAMMA`` the generator is
counter based, which lets :meth:`SplitMix64.random_array` produce blocks of
outputs with vectorized numpy arithmetic while staying bit-identical to
repeated :meth:`SplitMix64.next_u64` calls.

Derived streams (one per epoch, per word, ...) come from :func:`derive_seed`.
"""

from __future__ import annotations

import numpy as np

MASK64 = (1 << 64) - 1
GAMMA = 0x9E3779B97F4A7C15
_M1 = 0xBF58476D1CE4E5B9
_M2 = 0x94D049BB133111EB


def mix64(z: int) -> int:
    z &= MASK64
    z = ((z ^ (z >> 30)) * _M1) & MASK64
    z = ((z ^ (z >> 27)) * _M2) & MASK64
    return z ^ (z >> 31)


def derive_seed(seed: int, *keys: int) -> int:
    """Deterministically derive a child seed from ``seed`` and integer keys.

    ``h = mix64(h ^ mix64(key + GAMMA))`` folded over the keys, starting from
    ``h = mix64(seed)``.
    """
    h = mix64(seed & MASK64)
    for key in keys:
        h = mix64(h ^ mix64((key + GAMMA) & MASK64))
    return h


def _mix64_array(z: np.ndarray) -> np.ndarray:
    z = (z ^ (z >> np.uint64(30))) * np.uint64(_M1)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(_M2)
    return z ^ (z >> np.uint64(31))


class SplitMix64:
    def __init__(self, seed: int = 0):
        if seed < 0:
            raise ValueError("seed must be a non-negative 64-bit integer")
        self.state = seed & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + GAMMA) & MASK64
        return mix64(self.state)

    def random(self) -> float:
        """Uniform float in [0, 1) with 53 random bits."""
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))

    def randbelow(self, n: int) -> int:
        """Uniform integer in [0, n) by rejection sampling (no modulo bias)."""
        if n < 1:
            raise ValueError("n must be >= 1")
        limit = (1 << 64) - ((1 << 64) % n)
        while True:
            x = self.next_u64()
            if x < limit:
                return x % n

    def integers(self, low: int, high: int) -> int:
        """Uniform integer in the closed range [low, high]."""
        if high < low:
            raise ValueError("empty range")
        return low + self.randbelow(high - low + 1)

    def shuffle(self, items: list) -> None:
        """In-place Fisher-Yates shuffle (Durstenfeld, descending index)."""
        for i in range(len(items) - 1, 0, -1):
            j = self.randbelow(i + 1)
            items[i], items[j] = items[j], items[i]

    def random_array(self, shape) -> np.ndarray:
        """Array of uniform [0, 1) floats, same stream as repeated :meth:`random`."""
        n = int(np.prod(shape, dtype=np.int64))
        steps = np.arange(1, n + 1, dtype=np.uint64)
        with np.errstate(over="ignore"):
            counters = np.uint64(self.state) + steps * np.uint64(GAMMA)
            out = _mix64_array(counters)
        self.state = (self.state + n * GAMMA) & MASK64
        return ((out >> np.uint64(11)).astype(np.float64) * (1.0 / (1 << 53))).reshape(shape)

    def uniform(self, low: float, high: float, shape) -> np.ndarray:
        return low + (high - low) * self.random_array(shape)
