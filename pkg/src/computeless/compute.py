"""Object-detection stand-in: scratch execution, reuse execution, correctness.

The scratch path returns each segment's ground-truth label, so it doubles as
the correctness oracle for anything served from the Reuse Table.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from .errors import ConfigError, UsageError
from .reuse_table import ReuseTable
from .util import as_time
from .workload import Task


class Provenance(str, Enum):
    SCRATCH = "SCRATCH"
    REUSED = "REUSED"


@dataclass(frozen=True)
class ServerProfile:
    name: str
    compute_time_per_segment: float
    parallel_slots: int = 1

    def __post_init__(self):
        if self.name not in ("CLOUD", "EDGE"):
            raise ConfigError("name", "must be CLOUD or EDGE")
        if not self.compute_time_per_segment > 0:
            raise ConfigError("compute_time_per_segment", "must be > 0")
        if self.parallel_slots < 1:
            raise ConfigError("parallel_slots", "must be >= 1")

    def batch_time(self, n_segments: int) -> Fraction:
        """Time to run ``n_segments`` scratch executions spread over the slots."""
        rounds = -(-n_segments // self.parallel_slots)
        return rounds * as_time(self.compute_time_per_segment)


CLOUD = ServerProfile("CLOUD", 0.002, 64)
EDGE = ServerProfile("EDGE", 0.002, 1)


@dataclass(frozen=True)
class TaskOutput:
    labels: tuple[int, ...]
    provenance: tuple[Provenance, ...]


@dataclass(frozen=True)
class ReuseStats:
    hits: int
    misses: int


def execute_from_scratch(task: Task, profile: ServerProfile) -> tuple[TaskOutput, Fraction]:
    m = len(task.segments)
    out = TaskOutput(tuple(s.truth_label for s in task.segments),
                     (Provenance.SCRATCH,) * m)
    return out, profile.batch_time(m)


def execute_with_reuse(task: Task, table: ReuseTable, profile: ServerProfile,
                       lookup_seconds) -> tuple[TaskOutput, Fraction, ReuseStats]:
    """Serve each segment from the table when possible, else compute and store it.

    Lookups run serially; scratch executions share the server's slots.
    """
    labels, prov = [], []
    hits = misses = 0
    for seg in task.segments:
        res = table.lookup(seg.features)
        if res.hit:
            labels.append(res.output_label)
            prov.append(Provenance.REUSED)
            hits += 1
        else:
            labels.append(seg.truth_label)
            prov.append(Provenance.SCRATCH)
            misses += 1
            table.store(seg.features, seg.truth_label)
    cost = len(task.segments) * as_time(lookup_seconds) + profile.batch_time(misses)
    return TaskOutput(tuple(labels), tuple(prov)), cost, ReuseStats(hits, misses)


def assess_correctness(output: TaskOutput, task: Task) -> float:
    if len(output.labels) != len(task.segments):
        raise UsageError(
            f"output has {len(output.labels)} labels for {len(task.segments)} segments")
    good = sum(lab == s.truth_label for lab, s in zip(output.labels, task.segments))
    return good / len(task.segments)
