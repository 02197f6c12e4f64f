"""Pure-numpy Metropolis kernels, vectorised across reads.

This is the fallback used when the compiled extension is unavailable.  It
implements exactly the same algorithm as ``_kernels.pyx``: identical
counter-based streams, identical draw counts (one uniform per flip
attempt, taken in lockstep so that every read consumes the same counter
sequence) and identical floating-point evaluation order, so both backends
produce bit-for-bit equal states.

Acceptance probabilities are evaluated with `np.exp` for speed; whenever a
decision falls within a few ulps of the threshold it is re-evaluated with
libm's `math.exp` (what the C kernel calls), which removes the only
possible source of cross-backend divergence.
"""

from __future__ import annotations

import math

import numpy as np

from ..rng import GOLDEN, mix64_vec, u64_to_double

_MASK = (1 << 64) - 1


class _LockstepStreams:
    """One counter stream per read, advanced in lockstep."""

    def __init__(self, keys: np.ndarray):
        self.keys = keys.astype(np.uint64)
        self.counter = 0

    def next_doubles(self) -> np.ndarray:
        self.counter += 1
        offset = np.uint64((self.counter * GOLDEN) & _MASK)
        with np.errstate(over="ignore"):
            return u64_to_double(mix64_vec(self.keys + offset))


def _metropolis_accept(d_e: np.ndarray, u: np.ndarray, scale: float) -> np.ndarray:
    """Accept mask for flips with energy change `d_e` at exp(-scale * dE)."""
    with np.errstate(under="ignore"):
        p = np.exp(-scale * d_e)
    accept = (d_e <= 0.0) | (u < p)
    borderline = (d_e > 0.0) & (np.abs(u - p) <= 4.0 * np.spacing(p))
    if borderline.any():
        for r in np.nonzero(borderline)[0]:
            accept[r] = u[r] < math.exp(-scale * d_e[r])
    return accept


def sa_reads(indptr, indices, weights, h, betas, keys) -> np.ndarray:
    """Independent-restart simulated annealing; returns final spins (R, n)."""
    n = len(h)
    streams = _LockstepStreams(keys)
    s = np.empty((len(keys), n))
    for i in range(n):
        s[:, i] = np.where(streams.next_doubles() < 0.5, -1.0, 1.0)
    for beta in betas:
        for i in range(n):
            u = streams.next_doubles()
            loc = np.full(len(keys), h[i])
            for e in range(indptr[i], indptr[i + 1]):
                loc += weights[e] * s[:, indices[e]]
            d_e = -2.0 * s[:, i] * loc
            accept = _metropolis_accept(d_e, u, beta)
            s[accept, i] = -s[accept, i]
    return s.astype(np.int8)


def sqa_reads(indptr, indices, weights, h, jperp, inv_p, inv_temp, n_slices, keys) -> np.ndarray:
    """Path-integral Monte Carlo reads; returns final spins (R, P, n).

    The replica energy is (1/P) * sum_k E(s_k) minus the ferromagnetic
    inter-slice term; with a single slice the inter-slice term is constant
    and is skipped, reducing to plain Metropolis at the given temperature.
    """
    n = len(h)
    p_slices = int(n_slices)
    streams = _LockstepStreams(keys)
    s = np.empty((len(keys), p_slices, n))
    for k in range(p_slices):
        for i in range(n):
            s[:, k, i] = np.where(streams.next_doubles() < 0.5, -1.0, 1.0)
    for jp in jperp:
        for k in range(p_slices):
            km = k - 1 if k > 0 else p_slices - 1
            kp = k + 1 if k < p_slices - 1 else 0
            for i in range(n):
                u = streams.next_doubles()
                loc = np.full(len(keys), h[i])
                for e in range(indptr[i], indptr[i + 1]):
                    loc += weights[e] * s[:, k, indices[e]]
                val = loc * inv_p
                if p_slices > 1:
                    val = val - jp * (s[:, km, i] + s[:, kp, i])
                d_e = -2.0 * s[:, k, i] * val
                accept = _metropolis_accept(d_e, u, inv_temp)
                s[accept, k, i] = -s[accept, k, i]
    return s.astype(np.int8)
