"""Coefficient distributions and hardware-native instance generation.

Every node and edge owns an independent substream derived from the master
seed and the element's identity, so instance content does not depend on
iteration order or parallel scheduling.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.special import ndtr

from .model import DEFAULT_H_RANGE, DEFAULT_J_RANGE, IsingModel
from .rng import Stream, mix64_vec, u64_to_double
from .topology import HardwareGraph

_PROB_TOL = 1e-12


@dataclass(frozen=True)
class CoefficientDistribution:
    """Sampling law for a single Ising coefficient.

    kind "discrete_table": list of (value, probability) rows, probabilities
    summing to 1.  kind "uniform": U[lo, hi].  kind "truncated_normal":
    N(mu, sigma^2) conditioned on [lo, hi].
    """

    kind: str
    table: tuple = ()
    lo: float = 0.0
    hi: float = 0.0
    mu: float = 0.0
    sigma: float = 1.0

    def __post_init__(self):
        if self.kind == "discrete_table":
            if not self.table:
                raise ValueError("discrete table must be nonempty")
            total = sum(p for _, p in self.table)
            if any(p < 0 or p > 1 for _, p in self.table):
                raise ValueError("probabilities must lie in [0, 1]")
            if abs(total - 1.0) > _PROB_TOL:
                raise ValueError(f"probabilities sum to {total}, expected 1")
        elif self.kind in ("uniform", "truncated_normal"):
            if not self.lo < self.hi:
                raise ValueError("continuous kinds need lo < hi")
            if self.kind == "truncated_normal" and self.sigma <= 0:
                raise ValueError("sigma must be positive")
        else:
            raise ValueError(f"unknown distribution kind {self.kind!r}")

    # -- closed-form moments ------------------------------------------------

    def mean(self) -> float:
        if self.kind == "discrete_table":
            return sum(v * p for v, p in self.table)
        if self.kind == "uniform":
            return 0.5 * (self.lo + self.hi)
        a, b, z = self._tn_params()
        return self.mu + self.sigma * (_phi(a) - _phi(b)) / z

    def var(self) -> float:
        if self.kind == "discrete_table":
            m = self.mean()
            return sum(p * (v - m) ** 2 for v, p in self.table)
        if self.kind == "uniform":
            return (self.hi - self.lo) ** 2 / 12.0
        a, b, z = self._tn_params()
        fa, fb = _phi(a), _phi(b)
        adj = (a * fa - b * fb) / z if not (math.isinf(a) and math.isinf(b)) else 0.0
        return self.sigma**2 * (1.0 + adj - ((fa - fb) / z) ** 2)

    def std(self) -> float:
        return math.sqrt(self.var())

    def support(self) -> tuple[float, float]:
        if self.kind == "discrete_table":
            vals = [v for v, p in self.table if p > 0]
            return (min(vals), max(vals))
        return (self.lo, self.hi)

    def _tn_params(self):
        a = (self.lo - self.mu) / self.sigma
        b = (self.hi - self.mu) / self.sigma
        z = ndtr(b) - ndtr(a)
        if z <= 0:
            raise ValueError("truncation interval has no probability mass")
        return a, b, z

    # -- sampling -----------------------------------------------------------

    def sample(self, rng: Stream) -> float:
        """One draw; continuous kinds always land inside [lo, hi]."""
        if self.kind == "discrete_table":
            u = rng.next_double()
            acc = 0.0
            for v, p in self.table:
                acc += p
                if u < acc:
                    return float(v)
            return float(self.table[-1][0])
        if self.kind == "uniform":
            return rng.next_uniform(self.lo, self.hi)
        # truncated normal by rejection: acceptance is high for the ranges
        # used here, and the draw count per element stays stream-local.
        while True:
            x = self.mu + self.sigma * rng.next_normal()
            if self.lo <= x <= self.hi:
                return x

    def sample_batch(self, keys: np.ndarray) -> np.ndarray:
        """One draw per substream key (vectorised; same values as `sample`)."""
        if self.kind == "truncated_normal":
            return np.array([self.sample(Stream(int(k))) for k in keys])
        u = u64_to_double(_first_outputs(keys))
        if self.kind == "uniform":
            return self.lo + (self.hi - self.lo) * u
        probs = np.cumsum([p for _, p in self.table])
        vals = np.array([v for v, _ in self.table], dtype=np.float64)
        return vals[np.searchsorted(probs, u, side="right").clip(max=len(vals) - 1)]


def _phi(x: float) -> float:
    if math.isinf(x):
        return 0.0
    return math.exp(-0.5 * x * x) / math.sqrt(2.0 * math.pi)


def _first_outputs(keys: np.ndarray) -> np.ndarray:
    with np.errstate(over="ignore"):
        return mix64_vec(keys.astype(np.uint64) + np.uint64(0x9E3779B97F4A7C15))


def sample_coefficient(dist: CoefficientDistribution, rng: Stream) -> float:
    return dist.sample(rng)


def discrete(table) -> CoefficientDistribution:
    return CoefficientDistribution(kind="discrete_table", table=tuple(table))


def uniform(lo: float, hi: float) -> CoefficientDistribution:
    return CoefficientDistribution(kind="uniform", lo=lo, hi=hi)


def truncated_normal(mu: float, sigma: float, lo: float, hi: float) -> CoefficientDistribution:
    return CoefficientDistribution(kind="truncated_normal", mu=mu, sigma=sigma, lo=lo, hi=hi)


def cbfm_distributions() -> tuple[CoefficientDistribution, CoefficientDistribution]:
    """The corrupted-bias-ferromagnet discrete tables.

    J: 0 with 0.35, -1 with 0.10, +1 with 0.55.
    h: 0 with 0.15, -1 with 0.85, +1 with 0 (zero-probability row kept).
    """
    j_dist = discrete([(0.0, 0.35), (-1.0, 0.10), (1.0, 0.55)])
    h_dist = discrete([(0.0, 0.15), (-1.0, 0.85), (1.0, 0.0)])
    return h_dist, j_dist


def uniform_hardness_family(
    f: float,
    h_range: tuple = DEFAULT_H_RANGE,
    J_range: tuple = DEFAULT_J_RANGE,
) -> tuple[CoefficientDistribution, CoefficientDistribution]:
    """Uniform pair with target hardness ratio: J ~ U[-1,1], h ~ U[-f, f]."""
    if f <= 0:
        raise ValueError("hardness ratio target must be positive")
    if f > h_range[1]:
        raise ValueError(f"target {f} exceeds h_range {h_range}")
    return uniform(-f, f), uniform(J_range[0], J_range[1])


def _check_support(dist: CoefficientDistribution, bounds: tuple, what: str) -> None:
    lo, hi = dist.support()
    if lo < bounds[0] or hi > bounds[1]:
        raise ValueError(f"{what} distribution support [{lo}, {hi}] exceeds range {bounds}")


def generate_instance(
    graph: HardwareGraph,
    h_dist: CoefficientDistribution,
    J_dist: CoefficientDistribution,
    seed: int,
    h_range: tuple = DEFAULT_H_RANGE,
    J_range: tuple = DEFAULT_J_RANGE,
) -> IsingModel:
    """One i.i.d. coefficient per node and edge, deterministic in `seed`."""
    _check_support(h_dist, h_range, "h")
    _check_support(J_dist, J_range, "J")
    base = Stream.from_seed(seed)

    h_keys = np.array([base.substream("h", i).key for i in graph.nodes], dtype=np.uint64)
    h_vals = h_dist.sample_batch(h_keys) if len(h_keys) else np.zeros(0)
    e_keys = np.array(
        [base.substream("J", i, j).key for i, j in graph.edges], dtype=np.uint64
    )
    j_vals = J_dist.sample_batch(e_keys) if len(e_keys) else np.zeros(0)

    return IsingModel(
        graph=graph,
        h={i: float(v) for i, v in zip(graph.nodes, h_vals)},
        J={e: float(v) for e, v in zip(graph.edges, j_vals)},
        h_range=h_range,
        J_range=J_range,
        info={"seed": seed},
    )


def clip_to_ranges(
    model: IsingModel,
    h_range: tuple = DEFAULT_H_RANGE,
    J_range: tuple = DEFAULT_J_RANGE,
) -> IsingModel:
    """Clamp coefficients into the given (device) energy ranges.

    Models reject out-of-range values at construction, so clipping only
    does work when the source model was built with wider ranges.  The
    returned model records how many values moved under
    ``info["clipped_h"]`` / ``info["clipped_J"]``.
    """
    lo_h, hi_h = h_range
    lo_j, hi_j = J_range
    new_h = {i: min(max(v, lo_h), hi_h) for i, v in model.h.items()}
    new_j = {e: min(max(v, lo_j), hi_j) for e, v in model.J.items()}
    clipped_h = sum(1 for i in model.h if new_h[i] != model.h[i])
    clipped_j = sum(1 for e in model.J if new_j[e] != model.J[e])
    info = dict(model.info)
    info.update({"clipped_h": clipped_h, "clipped_J": clipped_j})
    return replace(model, h=new_h, J=new_j, h_range=h_range, J_range=J_range, info=info)
