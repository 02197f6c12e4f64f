"""Relative-difference metric and sample-set summary statistics.

Records with count k contribute k values everywhere (count expansion),
matching how samplers report multiplicity.  Quantiles use inclusive
linear interpolation between order statistics.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .model import SampleSet


class MetricError(ValueError):
    """Metric undefined for the given inputs."""


@dataclass(frozen=True)
class SummaryStats:
    min: float
    q1: float
    median: float
    mean: float
    q3: float
    max: float


@dataclass(frozen=True)
class RlSummary:
    """Per-sample relative differences against the baseline minimum."""

    rl_values: np.ndarray
    min: float
    q1: float
    median: float
    mean: float
    q3: float
    max: float

    @property
    def stats(self) -> SummaryStats:
        return SummaryStats(self.min, self.q1, self.median, self.mean, self.q3, self.max)


@dataclass(frozen=True)
class ConsistencyRow:
    """Energy gaps from a group's own minimum (boxplot-style summary)."""

    group_key: object
    mean_gap: float
    q1_gap: float
    q3_gap: float
    num_samples: int


def summary_stats(values) -> SummaryStats:
    arr = np.asarray(values, dtype=np.float64)
    if arr.size == 0:
        raise MetricError("cannot summarise an empty list")
    q1, med, q3 = np.quantile(arr, [0.25, 0.5, 0.75], method="linear")
    return SummaryStats(
        min=float(arr.min()),
        q1=float(q1),
        median=float(med),
        mean=float(arr.mean()),
        q3=float(q3),
        max=float(arr.max()),
    )


def relative_difference(candidate: SampleSet, baseline: SampleSet) -> RlSummary:
    """RL = (E_candidate - min E_baseline) / |min E_baseline| per sample.

    Negative values mean the candidate sample beat the baseline's best.
    """
    if len(baseline) == 0:
        raise MetricError("baseline sample set is empty")
    if len(candidate) == 0:
        raise MetricError("candidate sample set is empty")
    base_min = float(baseline.energies().min())
    if base_min == 0.0:
        raise MetricError("baseline minimum energy is zero; RL undefined")
    rl = (candidate.energies(expand=True) - base_min) / abs(base_min)
    s = summary_stats(rl)
    return RlSummary(
        rl_values=rl,
        min=s.min,
        q1=s.q1,
        median=s.median,
        mean=s.mean,
        q3=s.q3,
        max=s.max,
    )


def consistency_report(groups: dict) -> list[ConsistencyRow]:
    """Per group: spread of sample energies above the group's own minimum."""
    rows = []
    for key in sorted(groups, key=lambda k: (str(type(k)), k)):
        samples: SampleSet = groups[key]
        if len(samples) == 0:
            warnings.warn(f"group {key!r} is empty; skipped", stacklevel=2)
            continue
        energies = samples.energies(expand=True)
        gaps = energies - energies.min()
        q1, q3 = np.quantile(gaps, [0.25, 0.75], method="linear")
        rows.append(
            ConsistencyRow(
                group_key=key,
                mean_gap=float(gaps.mean()),
                q1_gap=float(q1),
                q3_gap=float(q3),
                num_samples=int(gaps.size),
            )
        )
    return rows
