"""Knapsack ingestion, QUBO construction, coefficient-range analysis and
hardness prediction.

The QUBO objective is  -sum(p_i x_i) + lam * (sum(w_i x_i) - C)^2, i.e.
maximise profit with the capacity constraint folded in as a quadratic
penalty.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .model import HardnessReport, Qubo, hardness_from_values, qubo_to_ising

DEFAULT_DP_WORK_CAP = 50_000_000


class KpParseError(ValueError):
    """Malformed knapsack instance text; message carries the line number."""


@dataclass(frozen=True)
class KnapsackInstance:
    """Items with positive integer profits/weights and a knapsack capacity."""

    profits: tuple
    weights: tuple
    capacity: int

    def __post_init__(self):
        if len(self.profits) != len(self.weights):
            raise ValueError("profits and weights must have equal length")
        if len(self.profits) == 0:
            raise ValueError("instance must have at least one item")
        if any(p < 1 for p in self.profits) or any(w < 1 for w in self.weights):
            raise ValueError("profits and weights must be >= 1")
        if self.capacity < 1:
            raise ValueError("capacity must be >= 1")

    @property
    def n(self) -> int:
        return len(self.profits)

    @property
    def infeasible(self) -> bool:
        """No single item fits: every selection except the empty one overweighs."""
        return self.capacity < min(self.weights)

    @property
    def trivial(self) -> bool:
        """Everything fits: taking all items is optimal."""
        return self.capacity >= sum(self.weights)


def parse_kp(source: str) -> KnapsackInstance:
    """Parse the item-list text format.

    Line 1: n.  Lines 2..n+1: "id p_i w_i".  Final line: capacity.
    Lines starting with '#' are ignored.
    """
    lines = [
        (no, ln.strip())
        for no, ln in enumerate(source.splitlines(), start=1)
        if ln.strip() and not ln.strip().startswith("#")
    ]
    if not lines:
        raise KpParseError("empty instance text")

    def as_ints(lineno, text, expected):
        fields = text.split()
        if len(fields) != expected:
            raise KpParseError(f"line {lineno}: expected {expected} field(s), got {len(fields)}")
        try:
            return [int(f) for f in fields]
        except ValueError:
            raise KpParseError(f"line {lineno}: non-integer field") from None

    n = as_ints(*lines[0], expected=1)[0]
    if n < 1:
        raise KpParseError(f"line {lines[0][0]}: item count must be >= 1")
    if len(lines) != n + 2:
        raise KpParseError(
            f"expected {n} item lines plus a capacity line, found {len(lines) - 1} data lines"
        )
    profits, weights = [], []
    for lineno, text in lines[1 : n + 1]:
        _, p, w = as_ints(lineno, text, expected=3)
        profits.append(p)
        weights.append(w)
    capacity = as_ints(*lines[n + 1], expected=1)[0]
    return KnapsackInstance(profits=tuple(profits), weights=tuple(weights), capacity=capacity)


def format_kp(instance: KnapsackInstance) -> str:
    """Inverse of `parse_kp`."""
    rows = [str(instance.n)]
    rows += [
        f"{i + 1} {p} {w}"
        for i, (p, w) in enumerate(zip(instance.profits, instance.weights))
    ]
    rows.append(str(instance.capacity))
    return "\n".join(rows) + "\n"


def default_lambda(instance: KnapsackInstance) -> float:
    """1 + max profit: a unit constraint violation always costs more than
    any single profit gain."""
    return 1.0 + max(instance.profits)


def kp_to_qubo(instance: KnapsackInstance, lam: float) -> Qubo:
    """Expand -sum(p x) + lam (sum(w x) - C)^2 into QUBO coefficients."""
    if lam <= 0:
        raise ValueError("lambda must be positive")
    w = instance.weights
    c = instance.capacity
    linear = {
        i: -p + lam * (w[i] ** 2 - 2.0 * c * w[i]) for i, p in enumerate(instance.profits)
    }
    quadratic = {
        (i, j): 2.0 * lam * w[i] * w[j]
        for i in range(instance.n)
        for j in range(i + 1, instance.n)
    }
    return Qubo(n=instance.n, linear=linear, quadratic=quadratic, offset=lam * float(c) ** 2)


@dataclass(frozen=True)
class RangeAnalysis:
    """Coefficient ranges in the penalty-only form (no lambda, no profits).

    Whenever C >= max w + min w, the linear range length dominates the
    quadratic one; the threshold marks where the two are exactly equal.
    """

    r_J: tuple
    r_h: tuple
    len_J: int
    len_h: int
    threshold_C: int
    dominance: bool


def coefficient_ranges(instance: KnapsackInstance) -> RangeAnalysis:
    if instance.n < 2:
        raise ValueError("range analysis needs at least two items")
    w_min = min(instance.weights)
    w_max = max(instance.weights)
    c = instance.capacity
    return RangeAnalysis(
        r_J=(w_min**2, w_max**2),
        r_h=(c * w_min, c * w_max),
        len_J=w_max**2 - w_min**2,
        len_h=c * (w_max - w_min),
        threshold_C=w_max + w_min,
        dominance=c * (w_max - w_min) >= w_max**2 - w_min**2,
    )


def kp_hardness(
    instance: KnapsackInstance, lam: float
) -> tuple[HardnessReport, HardnessReport]:
    """(QUBO-coefficient report, Ising-converted report).

    Both are returned because the literature leaves open which coefficient
    set the hardness ratio should be computed on.
    """
    if instance.n < 2:
        raise ValueError("hardness needs at least two items")
    qubo = kp_to_qubo(instance, lam)
    qubo_report = hardness_from_values(qubo.linear.values(), qubo.quadratic.values())
    ising, _ = qubo_to_ising(qubo)
    ising_report = hardness_from_values(ising.h.values(), ising.J.values())
    return qubo_report, ising_report


def solve_kp_exact(
    instance: KnapsackInstance, work_cap: int = DEFAULT_DP_WORK_CAP
) -> tuple[int, tuple]:
    """Dynamic-programming optimum: (best profit, selection vector).

    O(n * C) time and memory; refuses instances beyond `work_cap` cells.
    """
    n, c = instance.n, instance.capacity
    if n * (c + 1) > work_cap:
        raise ValueError(f"DP table {n}x{c + 1} exceeds work cap {work_cap}")
    dp = np.zeros(c + 1, dtype=np.int64)
    taken = np.zeros((n, c + 1), dtype=bool)
    for i, (p, w) in enumerate(zip(instance.profits, instance.weights)):
        if w > c:
            continue
        improved = dp[: c + 1 - w] + p > dp[w:]
        taken[i, w:] = improved
        dp[w:] = np.where(improved, dp[: c + 1 - w] + p, dp[w:])
    selection = [0] * n
    cap = c
    for i in range(n - 1, -1, -1):
        if taken[i, cap]:
            selection[i] = 1
            cap -= instance.weights[i]
    return int(dp[c]), tuple(selection)


@dataclass(frozen=True)
class BatchHardness:
    """Per-instance hardness rows plus binned counts for the histogram."""

    rows: list
    bin_edges: np.ndarray
    counts: np.ndarray
    skipped: list


def batch_hardness(
    sources: list,
    lam: float | None = None,
    bins: int = 50,
    which: str = "ising",
) -> BatchHardness:
    """Hardness ratios over a corpus of instance texts.

    `sources` is a list of (name, text) pairs.  Unparseable entries are
    skipped and listed.  The histogram is over the `which` variant
    ("ising" or "qubo"); per-instance rows always carry both.
    """
    if which not in ("ising", "qubo"):
        raise ValueError("which must be 'ising' or 'qubo'")
    if not sources:
        raise ValueError("no instance sources given")
    rows = []
    skipped = []
    for name, text in sources:
        try:
            instance = parse_kp(text)
            lam_i = default_lambda(instance) if lam is None else lam
            qubo_rep, ising_rep = kp_hardness(instance, lam_i)
            ranges = coefficient_ranges(instance)
        except (KpParseError, ValueError) as exc:
            skipped.append((name, str(exc)))
            continue
        rows.append(
            {
                "file": name,
                "n": instance.n,
                "C": instance.capacity,
                "lambda": lam_i,
                "sigma_h": ising_rep.sigma_h,
                "sigma_J": ising_rep.sigma_J,
                "F_qubo": qubo_rep.F,
                "F_ising": ising_rep.F,
                "dominance": ranges.dominance,
            }
        )
    if skipped:
        warnings.warn(f"skipped {len(skipped)} unparseable instance(s)", stacklevel=2)
    if not rows:
        raise ValueError("no parseable instances in the given sources")
    key = "F_ising" if which == "ising" else "F_qubo"
    values = [r[key] for r in rows if r[key] is not None]
    if values:
        counts, bin_edges = np.histogram(values, bins=bins)
    else:
        counts, bin_edges = np.zeros(bins, dtype=int), np.linspace(0.0, 1.0, bins + 1)
    return BatchHardness(rows=rows, bin_edges=bin_edges, counts=counts, skipped=skipped)


def random_instance(rng: np.random.Generator, n: int = 50) -> KnapsackInstance:
    """Synthetic instance: w ~ round(N(50, 15^2)) clipped to >= 1,
    C uniform strictly between max w and sum w, profits uniform in 1..100."""
    weights = np.maximum(1, np.rint(rng.normal(50.0, 15.0, size=n)).astype(int))
    max_w, total = int(weights.max()), int(weights.sum())
    capacity = int(rng.integers(max_w + 1, total))
    profits = rng.integers(1, 101, size=n)
    return KnapsackInstance(
        profits=tuple(int(p) for p in profits),
        weights=tuple(int(w) for w in weights),
        capacity=capacity,
    )
