"""Random-hyperplane LSH over cosine distance.

Each of ``num_tables`` tables hashes a vector to a ``signature_bits``-bit
code whose j-th bit is the sign of its dot product with the j-th hyperplane
of that table. Two vectors at angle theta agree on one bit with probability
1 - theta/pi.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, UsageError


@dataclass(frozen=True)
class LshParams:
    num_tables: int = 8
    signature_bits: int = 10
    dimension: int = 64
    rho: float = 0.5  # reported only
    seed: int = 0

    def __post_init__(self):
        if self.num_tables < 1:
            raise ConfigError("num_tables", "must be >= 1")
        if not 1 <= self.signature_bits <= 64:
            raise ConfigError("signature_bits", "must lie in [1, 64]")
        if self.dimension < 2:
            raise ConfigError("dimension", "must be >= 2")
        if not 0 < self.rho < 1:
            raise ConfigError("rho", "must lie in (0, 1)")


@dataclass(frozen=True)
class Signature:
    table_index: int
    bits: int


def cosine_distance(a, b) -> float:
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise UsageError(f"dimension mismatch: {a.shape} vs {b.shape}")
    na, nb = np.linalg.norm(a), np.linalg.norm(b)
    if na == 0 or nb == 0:
        raise UsageError("cosine distance undefined for a zero vector")
    cos = float(np.dot(a, b) / (na * nb))
    return 1.0 - min(1.0, max(-1.0, cos))


class LshIndex:
    """``num_tables`` bucket maps from signature bits to entry ids.

    Buckets are insertion-ordered dicts used as sets. Single writer; reads
    may run concurrently with each other.
    """

    def __init__(self, params: LshParams):
        self.params = params
        l, k, d = params.num_tables, params.signature_bits, params.dimension
        rng = np.random.default_rng(params.seed)
        planes = rng.standard_normal((l, k, d))
        planes /= np.linalg.norm(planes, axis=2, keepdims=True)
        planes.flags.writeable = False
        self.hyperplanes = planes
        self._weights = np.array([1 << j for j in range(k)], dtype=object)
        self.tables: list[dict[int, dict[int, None]]] = [{} for _ in range(l)]
        self._sigs: dict[int, tuple[int, ...]] = {}
        self._order: dict[int, int] = {}
        self._next_order = 0

    @property
    def size(self) -> int:
        return len(self._sigs)

    def __contains__(self, entry_id) -> bool:
        return entry_id in self._sigs

    def ids(self) -> set[int]:
        return set(self._sigs)

    def _codes(self, v) -> tuple[int, ...]:
        v = np.asarray(v, dtype=np.float64)
        if v.shape != (self.params.dimension,):
            raise UsageError(
                f"vector has shape {v.shape}, index expects ({self.params.dimension},)")
        bits = (self.hyperplanes @ v) >= 0.0
        return tuple(int(np.dot(row, self._weights)) for row in bits)

    def hash_signature(self, v) -> list[Signature]:
        return [Signature(t, c) for t, c in enumerate(self._codes(v))]

    def insert(self, v, entry_id: int) -> None:
        if entry_id in self._sigs:
            raise UsageError(f"entry {entry_id} already indexed")
        codes = self._codes(v)
        for table, code in zip(self.tables, codes):
            table.setdefault(code, {})[entry_id] = None
        self._sigs[entry_id] = codes
        self._order[entry_id] = self._next_order
        self._next_order += 1

    def remove(self, v, entry_id: int) -> None:
        if entry_id not in self._sigs:
            raise UsageError(f"entry {entry_id} is not indexed")
        codes = self._codes(v)
        if codes != self._sigs[entry_id]:
            raise UsageError(f"vector does not match the one entry {entry_id} was inserted with")
        for table, code in zip(self.tables, codes):
            bucket = table[code]
            del bucket[entry_id]
            if not bucket:
                del table[code]
        del self._sigs[entry_id]
        del self._order[entry_id]

    def query(self, v, max_candidates: int = 64) -> list[int]:
        """Ids sharing a bucket with ``v`` in any table, oldest insertion first."""
        if max_candidates < 1:
            raise UsageError("max_candidates must be >= 1")
        found: set[int] = set()
        for table, code in zip(self.tables, self._codes(v)):
            bucket = table.get(code)
            if bucket:
                found.update(bucket)
        return sorted(found, key=self._order.__getitem__)[:max_candidates]

    def candidate_counts(self, vectors) -> list[int]:
        """Unbounded candidate-set size per query vector, for the n**rho trend."""
        return [len(self.query(v, max_candidates=max(1, self.size))) for v in vectors]


def build_index(params: LshParams) -> LshIndex:
    return LshIndex(params)
