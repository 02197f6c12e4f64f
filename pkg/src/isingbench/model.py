"""Ising/QUBO data types, energy evaluation, conversion and hardness ratio."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from functools import cached_property
from typing import TYPE_CHECKING

import numpy as np

from .topology import HardwareGraph

if TYPE_CHECKING:
    from .generator import CoefficientDistribution

DEFAULT_H_RANGE = (-4.0, 4.0)
DEFAULT_J_RANGE = (-1.0, 1.0)


class DimensionError(ValueError):
    """State length does not match the model."""


def spin_state(values, num_nodes: int | None = None) -> np.ndarray:
    """Validate and canonicalise a spin vector (values in {-1, +1})."""
    s = np.asarray(values, dtype=np.int8)
    if s.ndim != 1:
        raise DimensionError("spin state must be one-dimensional")
    if num_nodes is not None and s.shape[0] != num_nodes:
        raise DimensionError(f"expected {num_nodes} spins, got {s.shape[0]}")
    if not np.all(np.abs(s) == 1):
        raise ValueError("spins must be -1 or +1")
    return s


@dataclass(frozen=True)
class IsingModel:
    """Coefficients h (per node) and J (per edge) over a hardware graph.

    Values outside the energy ranges are rejected at construction; use
    `generator.clip_to_ranges` for explicit clamping.
    """

    graph: HardwareGraph
    h: dict
    J: dict
    h_range: tuple = DEFAULT_H_RANGE
    J_range: tuple = DEFAULT_J_RANGE
    info: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        edge_set = set(self.graph.edges)
        n = self.graph.num_nodes
        for i, v in self.h.items():
            if not 0 <= i < n:
                raise ValueError(f"h key {i} is not a graph node")
            if not self.h_range[0] <= v <= self.h_range[1]:
                raise ValueError(f"h[{i}]={v} outside h_range {self.h_range}")
        for (i, j), v in self.J.items():
            if (i, j) not in edge_set:
                raise ValueError(f"J key ({i}, {j}) is not a graph edge")
            if not self.J_range[0] <= v <= self.J_range[1]:
                raise ValueError(f"J[{i},{j}]={v} outside J_range {self.J_range}")

    @property
    def num_nodes(self) -> int:
        return self.graph.num_nodes

    @cached_property
    def arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(h_vec, edge_index[2, m], j_vec) aligned over the J support."""
        n = self.graph.num_nodes
        h_vec = np.zeros(n)
        for i, v in self.h.items():
            h_vec[i] = v
        items = sorted(self.J.items())
        if items:
            eidx = np.array([[i, j] for (i, j), _ in items], dtype=np.int64).T
            jv = np.array([v for _, v in items])
        else:
            eidx = np.zeros((2, 0), dtype=np.int64)
            jv = np.zeros(0)
        return h_vec, eidx, jv

    @cached_property
    def csr(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Symmetric neighbour lists (indptr, indices, weights) for kernels."""
        n = self.graph.num_nodes
        nbrs: list[list[tuple[int, float]]] = [[] for _ in range(n)]
        for (i, j), v in sorted(self.J.items()):
            nbrs[i].append((j, v))
            nbrs[j].append((i, v))
        indptr = np.zeros(n + 1, dtype=np.int32)
        idx, wts = [], []
        for i in range(n):
            nbrs[i].sort()
            indptr[i + 1] = indptr[i] + len(nbrs[i])
            idx.extend(j for j, _ in nbrs[i])
            wts.extend(v for _, v in nbrs[i])
        return indptr, np.array(idx, dtype=np.int32), np.array(wts)


def ising_energy(model: IsingModel, state) -> float:
    """Energy sum(h_i s_i) + sum over edges of J_ij s_i s_j, each edge once."""
    s = spin_state(state, model.num_nodes)
    h_vec, eidx, jv = model.arrays
    sf = s.astype(np.float64)
    e = float(h_vec @ sf)
    if jv.size:
        e += float(jv @ (sf[eidx[0]] * sf[eidx[1]]))
    return e


def ising_energies(model: IsingModel, states: np.ndarray) -> np.ndarray:
    """Vectorised `ising_energy` over rows of a (num_states, n) spin matrix."""
    sf = np.asarray(states, dtype=np.float64)
    if sf.ndim != 2 or sf.shape[1] != model.num_nodes:
        raise DimensionError("states must be (num_states, num_nodes)")
    h_vec, eidx, jv = model.arrays
    e = sf @ h_vec
    if jv.size:
        e += (sf[:, eidx[0]] * sf[:, eidx[1]]) @ jv
    return e


@dataclass(frozen=True)
class Qubo:
    """Binary quadratic objective: offset + sum q_i x_i + sum q_ij x_i x_j."""

    n: int
    linear: dict
    quadratic: dict
    offset: float = 0.0

    def __post_init__(self):
        for i in self.linear:
            if not 0 <= i < self.n:
                raise ValueError(f"linear index {i} out of range")
        for i, j in self.quadratic:
            if i == j:
                raise ValueError(f"quadratic key ({i}, {j}) must use distinct indices")
            if not (0 <= i < self.n and 0 <= j < self.n):
                raise ValueError(f"quadratic key ({i}, {j}) out of range")
            if i > j:
                raise ValueError(f"quadratic key ({i}, {j}) must be stored as (low, high)")


def qubo_energy(qubo: Qubo, x) -> float:
    xv = np.asarray(x)
    if xv.shape != (qubo.n,):
        raise DimensionError(f"expected {qubo.n} binary variables, got shape {xv.shape}")
    if not np.all((xv == 0) | (xv == 1)):
        raise ValueError("entries must be 0 or 1")
    e = qubo.offset
    for i, v in qubo.linear.items():
        e += v * xv[i]
    for (i, j), v in qubo.quadratic.items():
        e += v * xv[i] * xv[j]
    return float(e)


def qubo_to_ising(qubo: Qubo) -> tuple[IsingModel, float]:
    """Map to spins via x = (1 + s) / 2.

    For every assignment, qubo_energy(x) == ising_energy(s) + offset up to
    floating round-off.  Energy ranges of the result are widened to cover
    the converted coefficients.
    """
    h = {i: 0.0 for i in range(qubo.n)}
    J = {}
    offset = qubo.offset
    for i, v in qubo.linear.items():
        h[i] += v / 2.0
        offset += v / 2.0
    for (i, j), v in sorted(qubo.quadratic.items()):
        J[(i, j)] = v / 4.0
        h[i] += v / 4.0
        h[j] += v / 4.0
        offset += v / 4.0

    h = {i: v for i, v in h.items()}
    graph = HardwareGraph(
        family="custom",
        params={},
        num_nodes=qubo.n,
        edges=tuple(sorted(J)),
    )
    h_bound = max([4.0] + [abs(v) for v in h.values()])
    j_bound = max([1.0] + [abs(v) for v in J.values()])
    model = IsingModel(
        graph=graph,
        h=h,
        J=J,
        h_range=(-h_bound, h_bound),
        J_range=(-j_bound, j_bound),
    )
    return model, offset


@dataclass(frozen=True)
class HardnessReport:
    """Dispersion ratio F = sigma_h / sigma_J; F is None when sigma_J = 0."""

    sigma_h: float
    sigma_J: float
    F: float | None
    h_count: int
    J_count: int
    mode: str

    @property
    def defined(self) -> bool:
        return self.F is not None


def _population_std(values) -> float:
    arr = np.asarray(list(values), dtype=np.float64)
    return float(np.sqrt(np.mean((arr - arr.mean()) ** 2)))


def hardness_from_values(h_values, j_values, mode: str = "empirical") -> HardnessReport:
    """Hardness report from explicit coefficient populations."""
    h_values = list(h_values)
    j_values = list(j_values)
    sigma_h = _population_std(h_values) if h_values else 0.0
    sigma_j = _population_std(j_values) if j_values else 0.0
    f = sigma_h / sigma_j if sigma_j > 0.0 else None
    return HardnessReport(
        sigma_h=sigma_h,
        sigma_J=sigma_j,
        F=f,
        h_count=len(h_values),
        J_count=len(j_values),
        mode=mode,
    )


def hardness_ratio(model: IsingModel) -> HardnessReport:
    """Empirical hardness ratio over the model's realised coefficients.

    Uses population standard deviations: the instance's coefficients are
    the whole population, not a sample.
    """
    if len(model.h) < 2 or len(model.J) < 2:
        raise ValueError("empirical mode needs >= 2 linear and >= 2 quadratic coefficients")
    return hardness_from_values(model.h.values(), model.J.values())


def analytic_hardness_ratio(
    h_dist: "CoefficientDistribution", J_dist: "CoefficientDistribution"
) -> HardnessReport:
    """Hardness ratio from closed-form distribution standard deviations."""
    for name, dist in (("h", h_dist), ("J", J_dist)):
        if abs(dist.mean()) > 1e-9:
            warnings.warn(f"{name} distribution mean {dist.mean():g} is not zero", stacklevel=2)
    sigma_h = h_dist.std()
    sigma_j = J_dist.std()
    if not (math.isfinite(sigma_h) and math.isfinite(sigma_j)):
        raise ValueError("distributions must have finite variance")
    f = sigma_h / sigma_j if sigma_j > 0.0 else None
    return HardnessReport(
        sigma_h=sigma_h,
        sigma_J=sigma_j,
        F=f,
        h_count=0,
        J_count=0,
        mode="analytic",
    )


@dataclass(frozen=True)
class SampleRecord:
    state: np.ndarray
    energy: float
    count: int = 1

    def __post_init__(self):
        if self.count < 1:
            raise ValueError("count must be >= 1")


@dataclass
class SampleSet:
    """Solver output: states with energies and multiplicities."""

    records: list
    solver_name: str
    solver_params: dict
    seed: int

    def __post_init__(self):
        if any(r.count < 1 for r in self.records):
            raise ValueError("record counts must be >= 1")

    def __len__(self) -> int:
        return len(self.records)

    @property
    def num_samples(self) -> int:
        return sum(r.count for r in self.records)

    def energies(self, expand: bool = False) -> np.ndarray:
        """Record energies; with expand=True each record contributes `count` values."""
        if expand:
            return np.repeat(
                [r.energy for r in self.records], [r.count for r in self.records]
            )
        return np.array([r.energy for r in self.records])

    def best(self) -> SampleRecord:
        return min(self.records, key=lambda r: r.energy)

    def check_energies(self, model: IsingModel, tol: float = 1e-9) -> float:
        """Re-derive every stored energy; returns the max deviation found."""
        worst = 0.0
        for r in self.records:
            dev = abs(ising_energy(model, r.state) - r.energy)
            worst = max(worst, dev)
        if worst > tol:
            raise ValueError(f"stored energies deviate by {worst:g} (tol {tol:g})")
        return worst
