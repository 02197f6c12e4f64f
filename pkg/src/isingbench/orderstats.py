"""Distributions of sample extremes and ranges, evaluated numerically.

Implements the order-statistics laws behind the knapsack coefficient
analysis: the c.d.f./p.d.f. of the sample range max - min, of the
capacity-scaled range C * (max - min), and of the squared-value range
max^2 - min^2, for i.i.d. draws from a named continuous family.

The inverse-square-root singularities of the squared-value densities are
removed by the substitution y = u^2 before quadrature.  Every law has a
Monte Carlo oracle (`monte_carlo_range`) for validation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import ndtr, ndtri

from .quadrature import adaptive_simpson, integrate_segments

_SQRT_2PI = math.sqrt(2.0 * math.pi)


@dataclass(frozen=True)
class QuadratureConfig:
    abs_tol: float = 1e-8
    rel_tol: float = 1e-6
    max_depth: int = 24
    infinite_tail_cutoff: float = 1e-10  # tail mass dropped on infinite supports

    def __post_init__(self):
        if self.abs_tol <= 0 or self.rel_tol <= 0:
            raise ValueError("tolerances must be positive")
        if not 0 < self.infinite_tail_cutoff < 1:
            raise ValueError("tail cutoff must be a probability")


DEFAULT_QUADRATURE = QuadratureConfig()


@dataclass(frozen=True)
class ContinuousDistribution:
    """Named density family with vectorised pdf/cdf/ppf.

    families: "uniform" (lo, hi); "truncated_normal" (mu, sigma, lo, hi
    with hi possibly +inf); "exponential" (rate, support [0, inf)).
    """

    family: str
    lo: float = 0.0
    hi: float = math.inf
    mu: float = 0.0
    sigma: float = 1.0
    rate: float = 1.0

    def __post_init__(self):
        if self.family == "uniform":
            if not (math.isfinite(self.lo) and math.isfinite(self.hi) and self.lo < self.hi):
                raise ValueError("uniform needs finite lo < hi")
        elif self.family == "truncated_normal":
            if self.sigma <= 0:
                raise ValueError("sigma must be positive")
            if not self.lo < self.hi:
                raise ValueError("need lo < hi")
        elif self.family == "exponential":
            if self.rate <= 0:
                raise ValueError("rate must be positive")
        else:
            raise ValueError(f"unknown family {self.family!r}")

    @property
    def support(self) -> tuple[float, float]:
        if self.family == "exponential":
            return (0.0, math.inf)
        return (self.lo, self.hi)

    def _tn_norm(self) -> tuple[float, float]:
        a = ndtr((self.lo - self.mu) / self.sigma)
        b = 1.0 if math.isinf(self.hi) else ndtr((self.hi - self.mu) / self.sigma)
        z = b - a
        if z <= 0:
            raise ValueError("truncation interval has no probability mass")
        return a, z

    def pdf(self, x):
        x = np.asarray(x, dtype=np.float64)
        lo, hi = self.support
        inside = (x >= lo) & (x <= hi)
        if self.family == "uniform":
            out = np.where(inside, 1.0 / (self.hi - self.lo), 0.0)
        elif self.family == "truncated_normal":
            _, z = self._tn_norm()
            t = (x - self.mu) / self.sigma
            out = np.where(inside, np.exp(-0.5 * t * t) / (self.sigma * _SQRT_2PI * z), 0.0)
        else:
            with np.errstate(over="ignore"):
                out = np.where(inside, self.rate * np.exp(-self.rate * np.maximum(x, 0.0)), 0.0)
        return out if out.ndim else float(out)

    def cdf(self, x):
        x = np.asarray(x, dtype=np.float64)
        lo, hi = self.support
        if self.family == "uniform":
            out = np.clip((x - lo) / (hi - lo), 0.0, 1.0)
        elif self.family == "truncated_normal":
            a, z = self._tn_norm()
            out = np.clip((ndtr((x - self.mu) / self.sigma) - a) / z, 0.0, 1.0)
        else:
            out = np.where(x > 0, -np.expm1(-self.rate * np.maximum(x, 0.0)), 0.0)
        return out if out.ndim else float(out)

    def ppf(self, q):
        q = np.asarray(q, dtype=np.float64)
        if np.any((q < 0) | (q > 1)):
            raise ValueError("quantile levels must lie in [0, 1]")
        if self.family == "uniform":
            out = self.lo + (self.hi - self.lo) * q
        elif self.family == "truncated_normal":
            a, z = self._tn_norm()
            out = self.mu + self.sigma * ndtri(a + q * z)
        else:
            with np.errstate(divide="ignore"):
                out = -np.log1p(-q) / self.rate
        return out if out.ndim else float(out)

    def sample(self, rng: np.random.Generator, size) -> np.ndarray:
        """Inverse-c.d.f. sampling; deterministic for a fixed generator state."""
        return np.asarray(self.ppf(rng.random(size)))

    def quad_hi(self, config: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
        """Finite upper integration limit (tail-cutoff quantile if infinite)."""
        if math.isfinite(self.support[1]):
            return self.support[1]
        return float(self.ppf(1.0 - config.infinite_tail_cutoff))


def uniform_dist(lo: float, hi: float) -> ContinuousDistribution:
    return ContinuousDistribution(family="uniform", lo=lo, hi=hi)


def truncated_normal_dist(
    mu: float, sigma: float, lo: float, hi: float = math.inf
) -> ContinuousDistribution:
    return ContinuousDistribution(family="truncated_normal", mu=mu, sigma=sigma, lo=lo, hi=hi)


def exponential_dist(rate: float) -> ContinuousDistribution:
    return ContinuousDistribution(family="exponential", rate=rate)


# -- extremes ----------------------------------------------------------------


def cdf_max(dist: ContinuousDistribution, n: int, x) -> float:
    """P(max of n draws <= x) = F(x)^n."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return np.asarray(dist.cdf(x)) ** n if np.ndim(x) else float(dist.cdf(x)) ** n


def cdf_min(dist: ContinuousDistribution, n: int, x) -> float:
    """P(min of n draws <= x) = 1 - (1 - F(x))^n."""
    if n < 1:
        raise ValueError("n must be >= 1")
    f = np.asarray(dist.cdf(x), dtype=np.float64)
    out = 1.0 - (1.0 - f) ** n
    return out if out.ndim else float(out)


def pdf_min(dist: ContinuousDistribution, n: int, y) -> float:
    """Density of the sample minimum: n f(y) (1 - F(y))^(n-1)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    y = np.asarray(y, dtype=np.float64)
    out = n * np.asarray(dist.pdf(y)) * (1.0 - np.asarray(dist.cdf(y))) ** (n - 1)
    return out if out.ndim else float(out)


def joint_pdf_min_range(dist: ContinuousDistribution, n: int, y, x) -> float:
    """Joint density of (min = y, range = x) for n >= 2 draws.

    n(n-1) f(y+x) f(y) (F(y+x) - F(y))^(n-2); zero outside the support or
    for negative ranges.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    y = np.asarray(y, dtype=np.float64)
    x = np.asarray(x, dtype=np.float64)
    diff = np.maximum(np.asarray(dist.cdf(y + x)) - np.asarray(dist.cdf(y)), 0.0)
    out = np.where(
        x >= 0,
        n * (n - 1) * np.asarray(dist.pdf(y + x)) * np.asarray(dist.pdf(y)) * diff ** (n - 2),
        0.0,
    )
    return out if out.ndim else float(out)


# -- range of the sample -----------------------------------------------------


def cdf_range(
    dist: ContinuousDistribution,
    n: int,
    x: float,
    config: QuadratureConfig = DEFAULT_QUADRATURE,
) -> float:
    """P(max - min <= x) by nested quadrature of the joint (min, max) law."""
    if n < 2:
        raise ValueError("n must be >= 2")
    if x <= 0:
        return 0.0
    lo = dist.support[0]
    hi = dist.quad_hi(config)

    def outer(y: float) -> float:
        fy = float(dist.pdf(y))
        if fy == 0.0:
            return 0.0
        z_hi = min(y + x, hi)
        if z_hi <= y:
            return 0.0
        p_lo = float(dist.cdf(y))

        def inner(z):
            diff = np.maximum(np.asarray(dist.cdf(z)) - p_lo, 0.0)
            return n * (n - 1) * np.asarray(dist.pdf(z)) * diff ** (n - 2)

        return fy * adaptive_simpson(
            inner, y, z_hi, abs_tol=config.abs_tol, rel_tol=config.rel_tol,
            max_depth=config.max_depth,
        )

    return adaptive_simpson(
        outer, lo, hi, abs_tol=config.abs_tol, rel_tol=config.rel_tol,
        max_depth=config.max_depth, vectorized=False,
    )


def pdf_range(
    dist: ContinuousDistribution,
    n: int,
    x: float,
    config: QuadratureConfig = DEFAULT_QUADRATURE,
) -> float:
    """Density of max - min at x: integral of the joint law over the min."""
    if n < 2:
        raise ValueError("n must be >= 2")
    if x < 0:
        return 0.0
    lo = dist.support[0]
    hi = dist.quad_hi(config)
    y_hi = hi if math.isinf(dist.support[1]) else max(lo, hi - x)

    def integrand(y):
        return joint_pdf_min_range(dist, n, y, x)

    return adaptive_simpson(
        integrand, lo, y_hi, abs_tol=config.abs_tol, rel_tol=config.rel_tol,
        max_depth=config.max_depth,
    )


# -- capacity-scaled range ---------------------------------------------------


def _check_positive_support(dist: ContinuousDistribution, what: str) -> None:
    if dist.support[0] < 0:
        raise ValueError(f"{what} must be supported on nonnegative reals")


def pdf_scaled_range(
    dist_w: ContinuousDistribution,
    dist_c: ContinuousDistribution,
    n: int,
    z: float,
    config: QuadratureConfig = DEFAULT_QUADRATURE,
) -> float:
    """Density of C * (max - min) via the product-law convolution.

    Integrates f_range(x) * f_C(z / x) / x over the positive range values
    compatible with the support of C.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    _check_positive_support(dist_c, "the capacity distribution")
    if z <= 0:
        return 0.0
    r_hi = dist_w.quad_hi(config) - dist_w.support[0]
    c_lo, _ = dist_c.support
    c_hi = dist_c.quad_hi(config)
    x_lo = z / c_hi if c_hi > 0 else 0.0
    x_hi = min(r_hi, z / c_lo) if c_lo > 0 else r_hi
    if x_hi <= x_lo:
        return 0.0

    def integrand(x: float) -> float:
        return pdf_range(dist_w, n, x, config) * float(dist_c.pdf(z / x)) / x

    return adaptive_simpson(
        integrand, x_lo, x_hi, abs_tol=config.abs_tol, rel_tol=config.rel_tol,
        max_depth=config.max_depth, vectorized=False,
    )


def cdf_scaled_range(
    dist_w: ContinuousDistribution,
    dist_c: ContinuousDistribution,
    n: int,
    z: float,
    config: QuadratureConfig = DEFAULT_QUADRATURE,
) -> float:
    """P(C * (max - min) <= z) = integral of F_C(z / x) f_range(x) dx."""
    if n < 2:
        raise ValueError("n must be >= 2")
    _check_positive_support(dist_c, "the capacity distribution")
    if z <= 0:
        return 0.0
    r_hi = dist_w.quad_hi(config) - dist_w.support[0]
    c_lo, _ = dist_c.support
    c_hi = dist_c.quad_hi(config)

    def integrand(x: float) -> float:
        return float(dist_c.cdf(z / x)) * pdf_range(dist_w, n, x, config)

    # F_C(z/x) is identically 1 below z/c_hi and 0 above z/c_lo
    eps = 1e-12 * r_hi
    breaks = [eps, r_hi]
    if c_hi > 0 and eps < z / c_hi < r_hi:
        breaks.append(z / c_hi)
    if c_lo > 0 and eps < z / c_lo < r_hi:
        breaks.append(z / c_lo)
    return integrate_segments(
        integrand, breaks, abs_tol=config.abs_tol, rel_tol=config.rel_tol,
        max_depth=config.max_depth, vectorized=False,
    )


# -- squared-value range -----------------------------------------------------


def cdf_squared_range(
    dist_w: ContinuousDistribution,
    n: int,
    x: float,
    config: QuadratureConfig = DEFAULT_QUADRATURE,
) -> float:
    """P(max w^2 - min w^2 <= x) for nonnegative-valued weights.

    The squared values have density f(sqrt(v)) / (2 sqrt(v)); substituting
    y = u^2 (and the inner variable likewise) turns the integrable
    endpoint singularities into smooth integrands over the original
    support.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    _check_positive_support(dist_w, "the weight distribution")
    if x <= 0:
        return 0.0
    lo = dist_w.support[0]
    hi = dist_w.quad_hi(config)

    def outer(u: float) -> float:
        fu = float(dist_w.pdf(u))
        if fu == 0.0:
            return 0.0
        v_hi = min(math.sqrt(u * u + x), hi)
        if v_hi <= u:
            return 0.0
        p_lo = float(dist_w.cdf(u))

        def inner(v):
            diff = np.maximum(np.asarray(dist_w.cdf(v)) - p_lo, 0.0)
            return n * (n - 1) * np.asarray(dist_w.pdf(v)) * diff ** (n - 2)

        return fu * adaptive_simpson(
            inner, u, v_hi, abs_tol=config.abs_tol, rel_tol=config.rel_tol,
            max_depth=config.max_depth,
        )

    return adaptive_simpson(
        outer, lo, hi, abs_tol=config.abs_tol, rel_tol=config.rel_tol,
        max_depth=config.max_depth, vectorized=False,
    )


def pdf_squared_range(
    dist_w: ContinuousDistribution,
    n: int,
    x: float,
    config: QuadratureConfig = DEFAULT_QUADRATURE,
) -> float:
    """Density of max w^2 - min w^2 at x > 0 (same substitution as the cdf)."""
    if n < 2:
        raise ValueError("n must be >= 2")
    _check_positive_support(dist_w, "the weight distribution")
    if x <= 0:
        return 0.0
    lo = dist_w.support[0]
    hi = dist_w.quad_hi(config)
    u_hi = math.sqrt(max(hi * hi - x, 0.0))
    if u_hi <= lo:
        return 0.0

    def integrand(u):
        u = np.asarray(u, dtype=np.float64)
        v = np.sqrt(u * u + x)
        diff = np.maximum(np.asarray(dist_w.cdf(v)) - np.asarray(dist_w.cdf(u)), 0.0)
        dens_v = np.asarray(dist_w.pdf(v)) / (2.0 * v)
        return n * (n - 1) * np.asarray(dist_w.pdf(u)) * dens_v * diff ** (n - 2)

    return adaptive_simpson(
        integrand, lo, u_hi, abs_tol=config.abs_tol, rel_tol=config.rel_tol,
        max_depth=config.max_depth,
    )


# -- Monte Carlo oracle and reports -------------------------------------------

MODES = ("range", "scaled_range", "squared_range")


def monte_carlo_range(
    dist_w: ContinuousDistribution,
    dist_c: ContinuousDistribution | None,
    n: int,
    mode: str,
    samples: int,
    seed: int,
) -> np.ndarray:
    """Sorted i.i.d. draws of the requested statistic (empirical c.d.f.)."""
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    if samples < 1000:
        raise ValueError("need at least 1000 samples")
    if n < 2:
        raise ValueError("n must be >= 2")
    rng = np.random.default_rng(seed)
    out = np.empty(samples)
    chunk = max(1, min(samples, 20_000_000 // max(n, 1)))
    start = 0
    while start < samples:
        count = min(chunk, samples - start)
        w = dist_w.sample(rng, (count, n))
        if mode == "squared_range":
            sq = w * w
            vals = sq.max(axis=1) - sq.min(axis=1)
        else:
            vals = w.max(axis=1) - w.min(axis=1)
            if mode == "scaled_range":
                if dist_c is None:
                    raise ValueError("scaled_range needs a capacity distribution")
                vals = vals * dist_c.sample(rng, count)
        out[start : start + count] = vals
        start += count
    return np.sort(out)


def empirical_cdf(sorted_draws: np.ndarray, x) -> np.ndarray:
    """Empirical c.d.f. of `monte_carlo_range` output at points x."""
    idx = np.searchsorted(sorted_draws, np.asarray(x, dtype=np.float64), side="right")
    out = idx / len(sorted_draws)
    return out if np.ndim(x) else float(out)


def statistic_cdf(
    dist_w: ContinuousDistribution,
    dist_c: ContinuousDistribution | None,
    n: int,
    mode: str,
    x: float,
    config: QuadratureConfig = DEFAULT_QUADRATURE,
) -> float:
    """Quadrature c.d.f. of the statistic selected by `mode`."""
    if mode == "range":
        return cdf_range(dist_w, n, x, config)
    if mode == "scaled_range":
        if dist_c is None:
            raise ValueError("scaled_range needs a capacity distribution")
        return cdf_scaled_range(dist_w, dist_c, n, x, config)
    if mode == "squared_range":
        return cdf_squared_range(dist_w, n, x, config)
    raise ValueError(f"mode must be one of {MODES}")


def statistic_pdf(
    dist_w: ContinuousDistribution,
    dist_c: ContinuousDistribution | None,
    n: int,
    mode: str,
    x: float,
    config: QuadratureConfig = DEFAULT_QUADRATURE,
) -> float:
    """Quadrature p.d.f. of the statistic selected by `mode`."""
    if mode == "range":
        return pdf_range(dist_w, n, x, config)
    if mode == "scaled_range":
        if dist_c is None:
            raise ValueError("scaled_range needs a capacity distribution")
        return pdf_scaled_range(dist_w, dist_c, n, x, config)
    if mode == "squared_range":
        return pdf_squared_range(dist_w, n, x, config)
    raise ValueError(f"mode must be one of {MODES}")


def quantile_from_cdf(cdf_fn, q: float, lo: float, hi: float, iters: int = 60) -> float:
    """Invert a monotone c.d.f. by bisection on [lo, hi]."""
    if not 0 < q < 1:
        raise ValueError("q must be in (0, 1)")
    f_hi = cdf_fn(hi)
    while f_hi < q:
        hi *= 2.0
        f_hi = cdf_fn(hi)
        if hi > 1e300:
            raise ValueError("quantile bracket expansion failed")
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if cdf_fn(mid) < q:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-9 * max(1.0, abs(hi)):
            break
    return 0.5 * (lo + hi)


@dataclass(frozen=True)
class TailReport:
    """Upper-tail width of the two coefficient-range laws.

    Width is the q0.99 / q0.50 quantile ratio of the statistic's law; the
    larger ratio marks the heavier tail.
    """

    scaled_range_tail_width: float
    squared_range_tail_width: float
    comparison: str


def tail_behavior_report(
    dist_w: ContinuousDistribution,
    dist_c: ContinuousDistribution,
    n: int,
    config: QuadratureConfig = DEFAULT_QUADRATURE,
) -> TailReport:
    """Compare tail widths of C*(max-min) and max^2-min^2."""
    r_hi = dist_w.quad_hi(config) - dist_w.support[0]
    c_hi = dist_c.quad_hi(config)
    w_hi = dist_w.quad_hi(config)

    def scaled_cdf(z):
        return cdf_scaled_range(dist_w, dist_c, n, z, config)

    def squared_cdf(z):
        return cdf_squared_range(dist_w, n, z, config)

    widths = []
    for fn, hi in ((scaled_cdf, r_hi * c_hi), (squared_cdf, w_hi**2)):
        q50 = quantile_from_cdf(fn, 0.50, 0.0, hi)
        q99 = quantile_from_cdf(fn, 0.99, 0.0, hi)
        widths.append(q99 / q50)
    comparison = (
        "scaled_range tail is wider"
        if widths[0] > widths[1]
        else "squared_range tail is wider"
    )
    return TailReport(
        scaled_range_tail_width=widths[0],
        squared_range_tail_width=widths[1],
        comparison=comparison,
    )
