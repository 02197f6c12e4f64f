"""Deterministic counter-based random streams.

All stochastic components of the package draw from splitmix64-style
counter streams: output ``i`` of the stream with key ``k`` is
``mix64(k + i * GOLDEN)``.  Because a stream is a pure function of
(key, counter), independent substreams can be derived for every node,
edge or solver read, which makes generation order- and thread-invariant:
parallel and sequential execution consume exactly the same values.

The compiled solver kernels re-implement `mix64` in C; the vectorised
helpers here are bit-compatible with them.
"""

from __future__ import annotations

import math

import numpy as np

_MASK = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
_GOLDEN_U64 = np.uint64(GOLDEN)

# double in [0, 1) from the top 53 bits
_INV_2POW53 = 1.0 / 9007199254740992.0


def mix64(z: int) -> int:
    """splitmix64 finalizer: a strong 64-bit bijection."""
    z &= _MASK
    z ^= z >> 30
    z = (z * 0xBF58476D1CE4E5B9) & _MASK
    z ^= z >> 27
    z = (z * 0x94D049BB133111EB) & _MASK
    z ^= z >> 31
    return z


def mix64_vec(z: np.ndarray) -> np.ndarray:
    """Vectorised `mix64` over a uint64 array."""
    with np.errstate(over="ignore"):
        z = z.astype(np.uint64, copy=True)
        z ^= z >> np.uint64(30)
        z *= np.uint64(0xBF58476D1CE4E5B9)
        z ^= z >> np.uint64(27)
        z *= np.uint64(0x94D049BB133111EB)
        z ^= z >> np.uint64(31)
    return z


def derive_key(seed: int, *parts: int | str) -> int:
    """Stable substream key from a seed and a path of labels.

    Labels may be ints (node/edge indices, read numbers) or short strings
    (stream tags such as "h" or "J").  The derivation never uses Python's
    builtin `hash`, so keys are reproducible across runs and platforms.
    """
    k = mix64(seed ^ 0x5851F42D4C957F2D)
    for p in parts:
        if isinstance(p, str):
            for b in p.encode("utf-8"):
                k = mix64(k ^ b)
        else:
            k = mix64(k ^ (p & _MASK))
    return k


def stream_u64(key: int, start: int, count: int) -> np.ndarray:
    """Outputs ``start .. start+count-1`` of stream `key` (1-based counter)."""
    with np.errstate(over="ignore"):
        idx = np.arange(start, start + count, dtype=np.uint64)
        return mix64_vec(np.uint64(key & _MASK) + idx * _GOLDEN_U64)


def u64_to_double(u: np.ndarray) -> np.ndarray:
    """Map uint64 outputs to doubles in [0, 1)."""
    return (u >> np.uint64(11)).astype(np.float64) * _INV_2POW53


class Stream:
    """Sequential view of one counter stream.

    `substream` derives an independent child stream; the child's key does
    not depend on how much of the parent has been consumed.
    """

    def __init__(self, key: int):
        self.key = key & _MASK
        self._i = 0

    @classmethod
    def from_seed(cls, seed: int, *parts: int | str) -> "Stream":
        return cls(derive_key(seed, *parts))

    def substream(self, *parts: int | str) -> "Stream":
        return Stream(derive_key(self.key, *parts))

    def next_u64(self) -> int:
        self._i += 1
        return mix64((self.key + self._i * GOLDEN) & _MASK)

    def next_double(self) -> float:
        """Uniform double in [0, 1)."""
        return (self.next_u64() >> 11) * _INV_2POW53

    def next_uniform(self, lo: float, hi: float) -> float:
        return lo + (hi - lo) * self.next_double()

    def next_normal(self) -> float:
        """Standard normal via Box-Muller (consumes two outputs)."""
        u1 = ((self.next_u64() >> 11) + 1) * _INV_2POW53  # (0, 1]
        u2 = self.next_double()
        return math.sqrt(-2.0 * math.log(u1)) * math.cos(2.0 * math.pi * u2)

    def doubles(self, count: int) -> np.ndarray:
        """Next `count` uniform doubles as one vectorised draw."""
        u = stream_u64(self.key, self._i + 1, count)
        self._i += count
        return u64_to_double(u)
