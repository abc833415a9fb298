"""Deterministic single-server FIFO simulation of one strategy.

All times are exact ``Fraction`` seconds so the per-task decomposition
completion = release + transit + queue + compute holds with no rounding.
"""

from __future__ import annotations

import dataclasses
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction

from .compute import (CLOUD, EDGE, ServerProfile, assess_correctness,
                      execute_from_scratch, execute_with_reuse)
from .errors import ConfigError
from .lsh import LshParams
from .network import CLOUD_PATH, EDGE_PATH, PathProfile, one_way_delay
from .reuse_table import ReuseTable
from .util import mix_seed
from .workload import (Task, WorkloadConfig, build_catalog, generate_workload,
                       workload_fingerprint)


class Strategy(str, Enum):
    CLOUD_ONLY = "CLOUD_ONLY"
    EDGE_ONLY = "EDGE_ONLY"
    EDGE_REUSE = "EDGE_REUSE"


@dataclass(frozen=True)
class Scenario:
    workload_config: WorkloadConfig = field(default_factory=WorkloadConfig)
    cloud_profile: ServerProfile = CLOUD
    edge_profile: ServerProfile = EDGE
    cloud_path: PathProfile = CLOUD_PATH
    edge_path: PathProfile = EDGE_PATH
    lsh_params: LshParams = field(default_factory=LshParams)
    table_capacity: int = 50
    similarity_threshold: float = 0.15
    max_candidates: int = 64
    lookup_seconds: float = 0.00005
    response_bytes_per_segment: int = 64
    strategy: Strategy = Strategy.EDGE_REUSE
    trials: int = 10
    master_seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "strategy", Strategy(self.strategy))
        if self.trials < 1:
            raise ConfigError("trials", "must be >= 1")
        if self.table_capacity < 1:
            raise ConfigError("table_capacity", "must be >= 1")
        if not 0 <= self.similarity_threshold <= 2:
            raise ConfigError("similarity_threshold", "must lie in [0, 2]")
        if self.max_candidates < 1:
            raise ConfigError("max_candidates", "must be >= 1")
        if not self.lookup_seconds >= 0:
            raise ConfigError("lookup_seconds", "must be >= 0")
        if self.response_bytes_per_segment < 0:
            raise ConfigError("response_bytes_per_segment", "must be >= 0")
        if self.lsh_params.dimension != self.workload_config.dimension:
            raise ConfigError("lsh.dimension", "must equal workload.dimension")
        if self.cloud_profile.name != "CLOUD" or self.edge_profile.name != "EDGE":
            raise ConfigError("cloud_profile.name", "profiles must be named CLOUD and EDGE")

    def with_strategy(self, strategy) -> "Scenario":
        return dataclasses.replace(self, strategy=Strategy(strategy))


@dataclass(frozen=True)
class TaskRecord:
    task_id: int
    release_time: Fraction
    completion_time: Fraction
    compute_seconds: Fraction
    transit_seconds: Fraction
    queue_seconds: Fraction
    correctness_fraction: float
    hits: int
    misses: int
    segments: int


@dataclass
class TrialResult:
    strategy: Strategy
    trial_index: int
    records: list[TaskRecord]
    fingerprint: str
    tasks: list[Task]
    table: ReuseTable | None = None


def trial_seeds(scenario: Scenario, trial_index: int) -> dict[str, int]:
    """Per-trial seeds; independent of strategy so all strategies see one stream."""
    base = mix_seed(scenario.master_seed, trial_index)
    return {
        "trial": base,
        "catalog": mix_seed(base, 1),
        "workload": mix_seed(base, 2),
        "lsh": mix_seed(base, 3),
    }


def trial_workload(scenario: Scenario, trial_index: int) -> list[Task]:
    seeds = trial_seeds(scenario, trial_index)
    wc = scenario.workload_config
    catalog = build_catalog(wc.catalog_size, wc.dimension, seeds["catalog"])
    return generate_workload(dataclasses.replace(wc, seed=seeds["workload"]), catalog)


def run_trial(scenario: Scenario, trial_index: int) -> TrialResult:
    seeds = trial_seeds(scenario, trial_index)
    tasks = trial_workload(scenario, trial_index)
    strategy = scenario.strategy
    if strategy is Strategy.CLOUD_ONLY:
        profile, path = scenario.cloud_profile, scenario.cloud_path
    else:
        profile, path = scenario.edge_profile, scenario.edge_path
    table = None
    if strategy is Strategy.EDGE_REUSE:
        table = ReuseTable(
            scenario.table_capacity,
            dataclasses.replace(scenario.lsh_params, seed=seeds["lsh"]),
            scenario.similarity_threshold,
            scenario.max_candidates,
        )

    arrivals = []
    for t in tasks:
        up = one_way_delay(path, t.input_size)
        arrivals.append((t.release_time + up, t.task_id, t, up))
    arrivals.sort(key=lambda a: (a[0], a[1]))

    # The whole server works on one task at a time; its segments share the slots.
    free_at = Fraction(0)
    records = {}
    for arrival, _, task, up in arrivals:
        start = max(arrival, free_at)
        if table is None:
            out, compute = execute_from_scratch(task, profile)
            hits = misses = 0
        else:
            out, compute, stats = execute_with_reuse(task, table, profile,
                                                     scenario.lookup_seconds)
            hits, misses = stats.hits, stats.misses
        free_at = start + compute
        down = one_way_delay(path, scenario.response_bytes_per_segment * len(task.segments))
        transit = up + down
        queue = start - arrival
        records[task.task_id] = TaskRecord(
            task_id=task.task_id,
            release_time=task.release_time,
            completion_time=task.release_time + transit + queue + compute,
            compute_seconds=compute,
            transit_seconds=transit,
            queue_seconds=queue,
            correctness_fraction=assess_correctness(out, task),
            hits=hits,
            misses=misses,
            segments=len(task.segments),
        )
    ordered = [records[t.task_id] for t in tasks]
    return TrialResult(strategy, trial_index, ordered, workload_fingerprint(tasks),
                       tasks, table)


def scratch_compute_total(scenario: Scenario, tasks: list[Task]) -> Fraction:
    """Total EDGE_ONLY compute time for a stream; independent of queueing."""
    return sum((scenario.edge_profile.batch_time(len(t.segments)) for t in tasks),
               Fraction(0))


def _run_one(args):
    scenario, i = args
    return run_trial(scenario, i)


def run_trials(scenario: Scenario, workers: int = 1) -> list[TrialResult]:
    jobs = [(scenario, i) for i in range(scenario.trials)]
    if workers <= 1 or scenario.trials == 1:
        return [_run_one(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_run_one, jobs))


def run_experiment(scenario: Scenario, workers: int = 1):
    from .metrics import build_report

    return build_report(scenario, run_trials(scenario, workers))
