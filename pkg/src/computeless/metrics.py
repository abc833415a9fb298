"""Evaluation metrics over task records and their aggregation into reports.

Aggregates are the 90th percentile across per-trial values. Pooled per-task
90th percentiles of completion and computation time are reported alongside.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import UsageError
from .workload import measure_redundancy_rate

PERCENTILE = 90.0

METRIC_FIELDS = (
    "redundancy_rate",
    "mean_completion_time",
    "mean_computation_time",
    "output_correctness",
    "reuse_hit_rate",
    "completion_gain",
)


def _need(records):
    if not records:
        raise UsageError("metric over an empty record set")


def completion_time(records) -> float:
    _need(records)
    total = sum((r.completion_time - r.release_time for r in records), Fraction(0))
    return float(total / len(records))


def computation_time(records) -> float:
    _need(records)
    total = sum((r.queue_seconds + r.compute_seconds for r in records), Fraction(0))
    return float(total / len(records))


def correctness_rate(records) -> float:
    _need(records)
    return float(np.mean([r.correctness_fraction for r in records]))


def reuse_hit_rate(records) -> float:
    """Hits over lookups; 0 for strategies that never consult a table."""
    _need(records)
    hits = sum(r.hits for r in records)
    lookups = hits + sum(r.misses for r in records)
    return hits / lookups if lookups else 0.0


def total_compute(records) -> Fraction:
    return sum((r.compute_seconds for r in records), Fraction(0))


def gain_from_totals(reuse_total, scratch_total) -> float:
    if scratch_total <= 0:
        return 0.0
    return max(0.0, float(1 - Fraction(reuse_total) / Fraction(scratch_total)))


def completion_gain(reuse, baseline) -> float:
    """Fraction of edge scratch compute time saved by reuse on the same stream.

    Both arguments are ``TrialResult`` objects (or anything with ``records``
    and ``fingerprint``); the fingerprints must agree.
    """
    if reuse.fingerprint != baseline.fingerprint:
        raise UsageError("completion gain needs identical workloads (fingerprint mismatch)")
    _need(reuse.records)
    _need(baseline.records)
    return gain_from_totals(total_compute(reuse.records), total_compute(baseline.records))


@dataclass
class MetricsReport:
    strategy: str
    num_tasks: int
    redundancy_rate: float
    mean_completion_time: float
    mean_computation_time: float
    output_correctness: float
    reuse_hit_rate: float
    completion_gain: float
    p90_task_completion_time: float = 0.0
    p90_task_computation_time: float = 0.0
    fingerprints: list[str] = field(default_factory=list)
    per_trial: list[dict] = field(default_factory=list)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "MetricsReport":
        return cls(**d)


def trial_metrics(trial, scratch_total=None) -> dict:
    """Per-trial metric values; ``scratch_total`` enables completion_gain."""
    recs = trial.records
    reuse_total = total_compute(recs)
    gain = 0.0
    if trial.strategy.value == "EDGE_REUSE" and scratch_total is not None:
        gain = gain_from_totals(reuse_total, scratch_total)
    return {
        "trial_index": trial.trial_index,
        "fingerprint": trial.fingerprint,
        "redundancy_rate": measure_redundancy_rate(trial.tasks),
        "mean_completion_time": completion_time(recs),
        "mean_computation_time": computation_time(recs),
        "output_correctness": correctness_rate(recs),
        "reuse_hit_rate": reuse_hit_rate(recs),
        "completion_gain": gain,
        "total_compute_seconds": str(reuse_total),
        "scratch_compute_seconds": str(scratch_total) if scratch_total is not None else None,
        "hits": sum(r.hits for r in recs),
        "misses": sum(r.misses for r in recs),
    }


def percentile(values: Sequence[float], q: float = PERCENTILE) -> float:
    return float(np.percentile(np.asarray(values, dtype=np.float64), q))


def build_report(scenario, trials) -> MetricsReport:
    from .engine import scratch_compute_total

    per_trial = [trial_metrics(t, scratch_compute_total(scenario, t.tasks)) for t in trials]
    agg = {k: percentile([p[k] for p in per_trial]) for k in METRIC_FIELDS}
    pooled_ct = [float(r.completion_time - r.release_time) for t in trials for r in t.records]
    pooled_cp = [float(r.queue_seconds + r.compute_seconds) for t in trials for r in t.records]
    return MetricsReport(
        strategy=scenario.strategy.value,
        num_tasks=scenario.workload_config.num_tasks,
        p90_task_completion_time=percentile(pooled_ct),
        p90_task_computation_time=percentile(pooled_cp),
        fingerprints=[t.fingerprint for t in trials],
        per_trial=per_trial,
        **agg,
    )
