from fractions import Fraction as F

import numpy as np
import pytest

from computeless.compute import (Provenance, ServerProfile, TaskOutput, assess_correctness,
                                 execute_from_scratch, execute_with_reuse)
from computeless.errors import ConfigError, UsageError
from computeless.lsh import LshParams
from computeless.reuse_table import ReuseTable
from computeless.workload import (Segment, Task, WorkloadConfig, build_catalog,
                                  generate_workload, make_feature_vector)
from tests.oracles import unit_rows

EDGE_2MS = ServerProfile("EDGE", 0.002, 1)
LOOKUP = F(5, 100000)
REUSE_CORRECTNESS_SIGMA_005 = 1.0  # measured; prototypes are far apart at d=64


def task_from(vectors, labels, tid=0):
    segs = tuple(Segment(make_feature_vector(v), lab, 100) for v, lab in zip(vectors, labels))
    return Task(tid, 0, segs, 0, 100 * len(segs))


def table(d=16, capacity=50):
    return ReuseTable(capacity, LshParams(8, 10, d, seed=0), 0.15)


def test_scratch_single_segment(rng):
    t = task_from(unit_rows(rng, 1, 16), [4])
    out, secs = execute_from_scratch(t, EDGE_2MS)
    assert secs == F(2, 1000)
    assert out.labels == (4,)
    assert out.provenance == (Provenance.SCRATCH,)


@pytest.mark.parametrize("slots,expect", [(1, F(8, 1000)), (2, F(4, 1000)), (3, F(4, 1000)),
                                          (64, F(2, 1000))])
def test_scratch_slots(rng, slots, expect):
    t = task_from(unit_rows(rng, 4, 16), [0, 1, 2, 3])
    _, secs = execute_from_scratch(t, ServerProfile("EDGE", 0.002, slots))
    assert secs == expect


def test_profile_validation():
    with pytest.raises(ConfigError):
        ServerProfile("EDGE", 0.0, 1)
    with pytest.raises(ConfigError):
        ServerProfile("EDGE", 0.001, 0)
    with pytest.raises(ConfigError):
        ServerProfile("FOG", 0.001, 1)


def test_reuse_empty_table_miss_path(rng):
    tab = table()
    t = task_from(unit_rows(rng, 1, 16), [2])
    out, secs, stats = execute_with_reuse(t, tab, EDGE_2MS, LOOKUP)
    assert (stats.hits, stats.misses) == (0, 1)
    assert secs == LOOKUP + F(2, 1000)
    assert len(tab) == 1
    assert out.labels == (2,)


def test_resubmitted_task_all_hits(rng):
    tab = table()
    t = task_from(unit_rows(rng, 3, 16), [0, 1, 2])
    execute_with_reuse(t, tab, EDGE_2MS, LOOKUP)
    out, secs, stats = execute_with_reuse(t, tab, EDGE_2MS, LOOKUP)
    assert (stats.hits, stats.misses) == (3, 0)
    assert secs == 3 * LOOKUP
    assert out.provenance == (Provenance.REUSED,) * 3
    assert assess_correctness(out, t) == 1.0


def test_scratch_portion_uses_slots(rng):
    tab = table()
    t = task_from(unit_rows(rng, 4, 16), [0, 1, 2, 3])
    _, secs, _ = execute_with_reuse(t, tab, ServerProfile("EDGE", 0.002, 2), LOOKUP)
    assert secs == 4 * LOOKUP + F(4, 1000)


def test_chained_duplicates_against_shadow_memo(rng):
    # segment i repeats segment i-1 in pairs: a a b b c c ...
    base = unit_rows(rng, 10, 16)
    vecs = [base[i // 2] for i in range(20)]
    memo, expect_hits = set(), 0
    for v in vecs:
        key = v.tobytes()
        expect_hits += key in memo
        memo.add(key)
    tab = table()
    hits = 0
    for i, v in enumerate(vecs):
        _, _, st = execute_with_reuse(task_from([v], [i // 2], i), tab, EDGE_2MS, LOOKUP)
        hits += st.hits
    assert hits == expect_hits == 10


def test_chained_single_stream(rng):
    # one m-segment task whose segment i duplicates segment i-1
    v = unit_rows(rng, 1, 16)[0]
    t = task_from([v] * 6, [0] * 6)
    _, _, st = execute_with_reuse(t, table(), EDGE_2MS, LOOKUP)
    assert (st.hits, st.misses) == (5, 1)


def test_correctness_fractions(rng):
    t = task_from(unit_rows(rng, 4, 16), [0, 1, 2, 3])
    out = TaskOutput((0, 1, 2, 9), (Provenance.SCRATCH,) * 4)
    assert assess_correctness(out, t) == 0.75
    with pytest.raises(UsageError):
        assess_correctness(TaskOutput((0,), (Provenance.SCRATCH,)), t)


def _stream(sigma, dup, seed=0, n=100):
    cat = build_catalog(100, 64, seed)
    return generate_workload(WorkloadConfig(num_tasks=n, perturbation_sigma=sigma,
                                            duplicate_probability=dup, seed=seed), cat)


def test_scratch_always_correct():
    for t in _stream(0.05, 0.3):
        out, _ = execute_from_scratch(t, EDGE_2MS)
        assert assess_correctness(out, t) == 1.0


def test_reuse_never_adds_scratch_work():
    tab = ReuseTable(50, LshParams(8, 10, 64, seed=1), 0.15)
    for t in _stream(0.05, 0.3):
        _, secs, st = execute_with_reuse(t, tab, EDGE_2MS, LOOKUP)
        m = len(t.segments)
        assert st.hits + st.misses == m
        scratch_only = secs - m * LOOKUP
        _, full = execute_from_scratch(t, EDGE_2MS)
        assert scratch_only <= full
        assert (scratch_only == full) == (st.hits == 0)


def test_duplicate_only_stream_is_exact():
    tasks = _stream(0.0, 1.0)
    tab = ReuseTable(500, LshParams(8, 10, 64, seed=1), 0.15)
    for t in tasks:
        out, _, _ = execute_with_reuse(t, tab, EDGE_2MS, LOOKUP)
        assert assess_correctness(out, t) == 1.0


def test_reuse_correctness_baseline_sigma_005():
    # oracle: scratch execution over the identical stream
    tasks = _stream(0.05, 0.3, seed=3)
    tab = ReuseTable(50, LshParams(8, 10, 64, seed=3), 0.15)
    fracs = []
    for t in tasks:
        truth, _ = execute_from_scratch(t, EDGE_2MS)
        out, _, _ = execute_with_reuse(t, tab, EDGE_2MS, LOOKUP)
        agree = sum(a == b for a, b in zip(out.labels, truth.labels)) / len(t.segments)
        assert agree == assess_correctness(out, t)
        fracs.append(agree)
    assert np.mean(fracs) == pytest.approx(REUSE_CORRECTNESS_SIGMA_005, abs=1e-12)


def test_reuse_deterministic():
    def run():
        tab = ReuseTable(50, LshParams(8, 10, 64, seed=1), 0.15)
        return [execute_with_reuse(t, tab, EDGE_2MS, LOOKUP) for t in _stream(0.05, 0.3)]
    assert run() == run()

