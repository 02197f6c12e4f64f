# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled Metropolis sweep kernels.

Bit-compatible with ``_kernels_py``: same counter-based streams, same
draw discipline (one uniform per flip attempt), same floating-point
evaluation order.  Compiled without -ffast-math so IEEE semantics match
the numpy fallback exactly.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport exp

cnp.import_array()

ctypedef cnp.uint64_t u64

cdef u64 _GOLDEN = 0x9E3779B97F4A7C15UL
cdef double _INV53 = 1.0 / 9007199254740992.0


cdef inline u64 _mix64(u64 z) nogil:
    z ^= z >> 30
    z *= 0xBF58476D1CE4E5B9UL
    z ^= z >> 27
    z *= 0x94D049BB133111EBUL
    z ^= z >> 31
    return z


cdef inline double _next_double(u64 key, u64 *ctr) nogil:
    ctr[0] += 1
    return <double> (_mix64(key + ctr[0] * _GOLDEN) >> 11) * _INV53


def sa_reads(int[::1] indptr, int[::1] indices, double[::1] weights, double[::1] h,
             double[::1] betas, u64[::1] keys):
    """Independent-restart simulated annealing; returns final spins (R, n)."""
    cdef Py_ssize_t n_reads = keys.shape[0]
    cdef Py_ssize_t n = h.shape[0]
    cdef Py_ssize_t sweeps = betas.shape[0]
    out_np = np.empty((n_reads, n), dtype=np.int8)
    cdef signed char[:, ::1] out = out_np
    buf_np = np.empty(n, dtype=np.float64)
    cdef double[::1] s = buf_np

    cdef Py_ssize_t r, t, i, e
    cdef u64 key, ctr
    cdef double u, loc, d_e, beta
    with nogil:
        for r in range(n_reads):
            key = keys[r]
            ctr = 0
            for i in range(n):
                u = _next_double(key, &ctr)
                s[i] = -1.0 if u < 0.5 else 1.0
            for t in range(sweeps):
                beta = betas[t]
                for i in range(n):
                    u = _next_double(key, &ctr)
                    loc = h[i]
                    for e in range(indptr[i], indptr[i + 1]):
                        loc += weights[e] * s[indices[e]]
                    d_e = -2.0 * s[i] * loc
                    if d_e <= 0.0 or u < exp(-beta * d_e):
                        s[i] = -s[i]
            for i in range(n):
                out[r, i] = <signed char> s[i]
    return out_np


def sqa_reads(int[::1] indptr, int[::1] indices, double[::1] weights, double[::1] h,
              double[::1] jperp, double inv_p, double inv_temp, Py_ssize_t n_slices,
              u64[::1] keys):
    """Path-integral Monte Carlo reads; returns final spins (R, P, n)."""
    cdef Py_ssize_t n_reads = keys.shape[0]
    cdef Py_ssize_t n = h.shape[0]
    cdef Py_ssize_t sweeps = jperp.shape[0]
    out_np = np.empty((n_reads, n_slices, n), dtype=np.int8)
    cdef signed char[:, :, ::1] out = out_np
    buf_np = np.empty((n_slices, n), dtype=np.float64)
    cdef double[:, ::1] s = buf_np

    cdef Py_ssize_t r, t, k, i, e, km, kp
    cdef u64 key, ctr
    cdef double u, loc, val, d_e, jp
    with nogil:
        for r in range(n_reads):
            key = keys[r]
            ctr = 0
            for k in range(n_slices):
                for i in range(n):
                    u = _next_double(key, &ctr)
                    s[k, i] = -1.0 if u < 0.5 else 1.0
            for t in range(sweeps):
                jp = jperp[t]
                for k in range(n_slices):
                    km = k - 1 if k > 0 else n_slices - 1
                    kp = k + 1 if k < n_slices - 1 else 0
                    for i in range(n):
                        u = _next_double(key, &ctr)
                        loc = h[i]
                        for e in range(indptr[i], indptr[i + 1]):
                            loc += weights[e] * s[k, indices[e]]
                        val = loc * inv_p
                        if n_slices > 1:
                            val = val - jp * (s[km, i] + s[kp, i])
                        d_e = -2.0 * s[k, i] * val
                        if d_e <= 0.0 or u < exp(-inv_temp * d_e):
                            s[k, i] = -s[k, i]
            for k in range(n_slices):
                for i in range(n):
                    out[r, k, i] = <signed char> s[k, i]
    return out_np
