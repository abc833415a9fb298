"""Synthetic task streams with Zipf-distributed object popularity.

Every image of the object-detection service is stood in for by a unit
feature vector. Objects come from a catalog of class prototypes; a segment
shows one object, either as a noisy view of its prototype or as an exact
copy of a segment seen earlier in the stream.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import ConfigError, UsageError
from .util import as_time

MAX_CATALOG_RETRIES = 1000


def make_feature_vector(values, dimension: int | None = None) -> np.ndarray:
    """Validate ``values`` and return them as a read-only unit vector."""
    v = np.array(values, dtype=np.float64).ravel()
    if dimension is not None and v.shape[0] != dimension:
        raise UsageError(f"expected dimension {dimension}, got {v.shape[0]}")
    if v.shape[0] == 0:
        raise UsageError("feature vector must have dimension > 0")
    norm = np.linalg.norm(v)
    if not np.isfinite(norm) or norm == 0.0:
        raise UsageError("feature vector must be finite and nonzero")
    v = v / norm
    v.flags.writeable = False
    return v


@dataclass(frozen=True, eq=False)
class ObjectClass:
    class_id: int
    prototype: np.ndarray


@dataclass(frozen=True, eq=False)
class Segment:
    features: np.ndarray
    truth_label: int
    size: int


@dataclass(frozen=True, eq=False)
class Task:
    task_id: int
    user_id: int
    segments: tuple[Segment, ...]
    release_time: Fraction
    input_size: int

    def __post_init__(self):
        if not self.segments:
            raise UsageError("a task needs at least one segment")
        if self.input_size != sum(s.size for s in self.segments):
            raise UsageError("input_size must equal the sum of segment sizes")


@dataclass(frozen=True)
class WorkloadConfig:
    num_tasks: int = 100
    num_users: int = 10
    catalog_size: int = 100
    dimension: int = 64
    zipf_exponent: float = 1.2
    segments_per_task: tuple[int, int] = (1, 3)
    segment_bytes: tuple[int, int] = (80_000, 120_000)
    perturbation_sigma: float = 0.02
    duplicate_probability: float = 0.3
    inter_arrival: float = 0.004
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "segments_per_task", tuple(self.segments_per_task))
        object.__setattr__(self, "segment_bytes", tuple(self.segment_bytes))
        checks = [
            ("num_tasks", self.num_tasks >= 1, "must be >= 1"),
            ("num_users", self.num_users >= 1, "must be >= 1"),
            ("catalog_size", self.catalog_size >= 1, "must be >= 1"),
            ("dimension", self.dimension >= 2, "must be >= 2"),
            ("zipf_exponent", self.zipf_exponent > 0, "must be > 0"),
            ("perturbation_sigma", self.perturbation_sigma >= 0, "must be >= 0"),
            ("duplicate_probability", 0 <= self.duplicate_probability <= 1,
             "must lie in [0, 1]"),
            ("inter_arrival", self.inter_arrival >= 0, "must be >= 0"),
        ]
        for name, ok, msg in checks:
            if not ok:
                raise ConfigError(name, msg)
        for name in ("segments_per_task", "segment_bytes"):
            lo_hi = getattr(self, name)
            if len(lo_hi) != 2 or not (1 <= lo_hi[0] <= lo_hi[1]):
                raise ConfigError(name, "must be [min, max] with 1 <= min <= max")


@lru_cache(maxsize=64)
def zipf_pmf(exponent: float, catalog_size: int) -> np.ndarray:
    """Analytic Zipf pmf over ranks 1..catalog_size."""
    if not exponent > 0:
        raise ConfigError("zipf_exponent", "must be > 0")
    if catalog_size < 1:
        raise ConfigError("catalog_size", "must be >= 1")
    w = np.arange(1, catalog_size + 1, dtype=np.float64) ** -exponent
    pmf = w / w.sum()
    pmf.flags.writeable = False
    return pmf


@lru_cache(maxsize=64)
def _zipf_cdf(exponent: float, catalog_size: int) -> np.ndarray:
    cdf = np.cumsum(zipf_pmf(exponent, catalog_size))
    cdf[-1] = 1.0
    return cdf


def zipf_sample(exponent: float, catalog_size: int, rng: np.random.Generator) -> int:
    """Draw a rank in [1, catalog_size] with P(r) proportional to r**-exponent."""
    cdf = _zipf_cdf(float(exponent), int(catalog_size))
    return int(np.searchsorted(cdf, rng.random(), side="right")) + 1


def build_catalog(catalog_size: int, dimension: int, seed: int,
                  max_cosine: float = 0.9) -> list[ObjectClass]:
    """Draw ``catalog_size`` isotropic prototypes, pairwise cosine below ``max_cosine``."""
    if catalog_size < 1:
        raise ConfigError("catalog_size", "must be >= 1")
    if dimension < 2:
        raise ConfigError("dimension", "must be >= 2")
    rng = np.random.default_rng(seed)
    protos = np.empty((catalog_size, dimension))
    for i in range(catalog_size):
        for _ in range(MAX_CATALOG_RETRIES):
            v = rng.standard_normal(dimension)
            v /= np.linalg.norm(v)
            if i == 0 or np.max(protos[:i] @ v) < max_cosine:
                protos[i] = v
                break
        else:
            raise ConfigError(
                "dimension",
                f"could not separate {catalog_size} prototypes in dimension "
                f"{dimension}; use a larger dimension",
            )
    return [ObjectClass(i, make_feature_vector(protos[i])) for i in range(catalog_size)]


def generate_workload(config: WorkloadConfig, catalog: list[ObjectClass]) -> list[Task]:
    if not catalog:
        raise UsageError("catalog is empty")
    if catalog[0].prototype.shape[0] != config.dimension:
        raise ConfigError("dimension", "catalog dimension differs from workload dimension")
    rng = np.random.default_rng(config.seed)
    emitted: list[Segment] = []
    tasks = []
    dt = as_time(config.inter_arrival)
    smin, smax = config.segments_per_task
    bmin, bmax = config.segment_bytes
    size_cap = min(config.catalog_size, len(catalog))
    for task_id in range(config.num_tasks):
        user_id = int(rng.integers(config.num_users))
        m = int(rng.integers(smin, smax + 1))
        segs = []
        for _ in range(m):
            if emitted and rng.random() < config.duplicate_probability:
                seg = emitted[int(rng.integers(len(emitted)))]
            else:
                cls = catalog[zipf_sample(config.zipf_exponent, size_cap, rng) - 1]
                features = cls.prototype
                if config.perturbation_sigma > 0:
                    features = make_feature_vector(
                        features + rng.normal(0.0, config.perturbation_sigma, config.dimension))
                size = int(rng.integers(bmin, bmax + 1))
                seg = Segment(features, cls.class_id, size)
            segs.append(seg)
        emitted.extend(segs)
        tasks.append(Task(task_id, user_id, tuple(segs), task_id * dt,
                          sum(s.size for s in segs)))
    return tasks


def measure_redundancy_rate(tasks: list[Task]) -> float:
    """1 - distinct objects / total segments over the whole stream."""
    labels = [s.truth_label for t in tasks for s in t.segments]
    if not labels:
        raise UsageError("redundancy rate of an empty task list is undefined")
    return 1.0 - len(set(labels)) / len(labels)


def workload_fingerprint(tasks: list[Task]) -> str:
    """SHA-256 over everything a strategy can observe about the stream."""
    h = hashlib.sha256()
    for t in tasks:
        h.update(f"{t.task_id}|{t.user_id}|{t.release_time}|{t.input_size}|".encode())
        for s in t.segments:
            h.update(f"{s.truth_label}|{s.size}|".encode())
            h.update(s.features.tobytes())
    return h.hexdigest()
