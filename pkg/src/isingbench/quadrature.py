"""Adaptive Simpson quadrature with interval-error accumulation.

The engine refines a worklist of intervals breadth-first, evaluating the
integrand on whole batches of midpoints at once, so vectorised integrands
(numpy ufunc style) are cheap even at tight tolerances.  Intervals that
hit the recursion-depth cap are force-accepted and their error is
accumulated; if the accumulated excess exceeds the requested tolerance a
`QuadratureError` carrying the achieved estimate is raised.
"""

from __future__ import annotations

import numpy as np

MAX_INTERVALS = 1 << 20


class QuadratureError(RuntimeError):
    """Quadrature failed to converge; `.estimate` holds the best value."""

    def __init__(self, message: str, estimate: float, error: float):
        super().__init__(message)
        self.estimate = estimate
        self.error = error


def adaptive_simpson(
    f,
    a: float,
    b: float,
    abs_tol: float = 1e-8,
    rel_tol: float = 1e-6,
    max_depth: int = 24,
    vectorized: bool = True,
) -> float:
    """Integrate f over [a, b].

    `f` must map a float ndarray to a float ndarray unless
    vectorized=False, in which case it is called point-wise.
    """
    if not vectorized:
        scalar_f = f

        def f(xs):  # noqa: ANN001 - adapter
            return np.array([scalar_f(float(x)) for x in xs])

    if a == b:
        return 0.0
    if b < a:
        return -adaptive_simpson(f, b, a, abs_tol, rel_tol, max_depth)

    xs = np.array([a, 0.5 * (a + b), b])
    fa, fm, fb = (float(v) for v in f(xs))
    whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    tol = max(abs_tol, rel_tol * abs(whole))

    # interval state: lo, hi, f(lo), f(mid), f(hi), simpson, tolerance, depth
    lo = np.array([a])
    hi = np.array([b])
    f_lo = np.array([fa])
    f_mid = np.array([fm])
    f_hi = np.array([fb])
    simpson = np.array([whole])
    tols = np.array([tol])
    depth = np.array([0])

    total = 0.0
    forced_error = 0.0
    while lo.size:
        mid = 0.5 * (lo + hi)
        lm = 0.5 * (lo + mid)
        rm = 0.5 * (mid + hi)
        f_new = f(np.concatenate([lm, rm]))
        f_lm = np.asarray(f_new[: lo.size], dtype=np.float64)
        f_rm = np.asarray(f_new[lo.size :], dtype=np.float64)
        s_left = (mid - lo) / 6.0 * (f_lo + 4.0 * f_lm + f_mid)
        s_right = (hi - mid) / 6.0 * (f_mid + 4.0 * f_rm + f_hi)
        refined = s_left + s_right
        err = (refined - simpson) / 15.0

        converged = np.abs(err) <= tols
        exhausted = ~converged & ((depth >= max_depth) | (lo.size > MAX_INTERVALS))
        done = converged | exhausted
        total += float((refined[done] + err[done]).sum())
        forced_error += float(np.abs(err[exhausted]).sum())

        keep = ~done
        lo, hi, mid = lo[keep], hi[keep], mid[keep]
        f_lo, f_mid, f_hi = f_lo[keep], f_mid[keep], f_hi[keep]
        f_lm, f_rm = f_lm[keep], f_rm[keep]
        s_left, s_right = s_left[keep], s_right[keep]
        half_tol = 0.5 * tols[keep]
        child_depth = depth[keep] + 1
        lo = np.concatenate([lo, mid])
        hi = np.concatenate([mid, hi])
        f_lo = np.concatenate([f_lo, f_mid])
        f_hi = np.concatenate([f_mid, f_hi])
        f_mid = np.concatenate([f_lm, f_rm])
        simpson = np.concatenate([s_left, s_right])
        tols = np.concatenate([half_tol, half_tol])
        depth = np.concatenate([child_depth, child_depth])

    if forced_error > max(tol, 1e-300):
        raise QuadratureError(
            f"accumulated error {forced_error:g} exceeds tolerance {tol:g} "
            f"after depth {max_depth}",
            estimate=total,
            error=forced_error,
        )
    return total


def integrate_segments(
    f,
    points,
    abs_tol: float = 1e-8,
    rel_tol: float = 1e-6,
    max_depth: int = 24,
    vectorized: bool = True,
) -> float:
    """Sum of adaptive integrals over consecutive breakpoint pairs."""
    pts = sorted(set(float(p) for p in points))
    total = 0.0
    for a, b in zip(pts[:-1], pts[1:]):
        total += adaptive_simpson(
            f, a, b, abs_tol=abs_tol, rel_tol=rel_tol, max_depth=max_depth, vectorized=vectorized
        )
    return total
