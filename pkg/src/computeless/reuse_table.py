"""The edge server's Reuse Table: similarity lookup over LSH plus LFU eviction."""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import UsageError
from .lsh import LshIndex, LshParams, cosine_distance


class Outcome(str, Enum):
    HIT = "HIT"
    MISS = "MISS"


@dataclass
class ReuseEntry:
    entry_id: int
    features: np.ndarray
    output_label: int
    frequency: int
    insert_seq: int


@dataclass(frozen=True)
class LookupResult:
    outcome: Outcome
    matched_entry: int | None = None
    distance: float | None = None
    output_label: int | None = None

    @property
    def hit(self) -> bool:
        return self.outcome is Outcome.HIT


class ReuseTable:
    """Capacity-bounded store of executed (input, output) pairs.

    ``frequency`` counts the initial store plus every hit served. Eviction
    removes the minimal (frequency, insert_seq) entry, found through a heap
    with lazy invalidation.
    """

    def __init__(self, capacity: int = 50, lsh_params: LshParams | None = None,
                 similarity_threshold: float = 0.15, max_candidates: int = 64):
        if capacity < 1:
            raise UsageError("capacity must be >= 1")
        if not 0.0 <= similarity_threshold <= 2.0:
            raise UsageError("similarity_threshold must lie in [0, 2]")
        self.capacity = capacity
        self.similarity_threshold = similarity_threshold
        self.max_candidates = max_candidates
        self.index = LshIndex(lsh_params or LshParams())
        self.entries: dict[int, ReuseEntry] = {}
        self._heap: list[tuple[int, int, int]] = []
        self._next_id = 0
        self._next_seq = 0
        self.stores = 0
        self.hits = 0
        self.evictions: list[int] = []

    def __len__(self):
        return len(self.entries)

    def lookup(self, features) -> LookupResult:
        best = None
        for eid in self.index.query(features, self.max_candidates):
            e = self.entries[eid]
            if np.array_equal(e.features, features):
                dist = 0.0
            else:
                dist = cosine_distance(e.features, features)
            key = (dist, e.insert_seq)
            if best is None or key < best[0]:
                best = (key, e)
            if dist == 0.0 and best[1] is e:
                break  # candidates are oldest first, so no later one can win the tie
        if best is None or best[0][0] > self.similarity_threshold:
            return LookupResult(Outcome.MISS)
        e = best[1]
        e.frequency += 1
        self.hits += 1
        heapq.heappush(self._heap, (e.frequency, e.insert_seq, e.entry_id))
        return LookupResult(Outcome.HIT, e.entry_id, best[0][0], e.output_label)

    def store(self, features, output_label: int) -> int:
        while len(self.entries) >= self.capacity:
            self.evict_lfu()
        eid = self._next_id
        self._next_id += 1
        e = ReuseEntry(eid, features, output_label, 1, self._next_seq)
        self._next_seq += 1
        self.entries[eid] = e
        self.index.insert(features, eid)
        heapq.heappush(self._heap, (1, e.insert_seq, eid))
        self.stores += 1
        return eid

    def evict_lfu(self) -> int:
        if not self.entries:
            raise UsageError("cannot evict from an empty table")
        while True:
            freq, _, eid = heapq.heappop(self._heap)
            e = self.entries.get(eid)
            if e is not None and e.frequency == freq:
                break
        del self.entries[eid]
        self.index.remove(e.features, eid)
        self.evictions.append(eid)
        return eid

    def snapshot(self) -> dict:
        return {
            "capacity": self.capacity,
            "similarity_threshold": self.similarity_threshold,
            "stores": self.stores,
            "hits": self.hits,
            "evictions": list(self.evictions),
            "entries": [
                {"entry_id": e.entry_id, "output_label": e.output_label,
                 "frequency": e.frequency, "insert_seq": e.insert_seq}
                for e in sorted(self.entries.values(), key=lambda e: e.insert_seq)
            ],
        }


def lookup(table: ReuseTable, features) -> LookupResult:
    return table.lookup(features)


def store(table: ReuseTable, features, output_label: int) -> int:
    return table.store(features, output_label)


def evict_lfu(table: ReuseTable) -> int:
    return table.evict_lfu()
