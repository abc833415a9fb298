import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import stats

from computeless.errors import ConfigError, UsageError
from computeless.workload import (Segment, Task, WorkloadConfig, build_catalog,
                                  generate_workload, make_feature_vector,
                                  measure_redundancy_rate, workload_fingerprint,
                                  zipf_pmf, zipf_sample)
from tests.oracles import zipf_pmf_by_summation


def _task(labels, tid=0):
    segs = tuple(Segment(make_feature_vector([1.0, 0.0]), lab, 10) for lab in labels)
    return Task(tid, 0, segs, 0, 10 * len(labels))


def test_zipf_single_class_always_rank_one(rng):
    assert {zipf_sample(1.0, 1, rng) for _ in range(200)} == {1}


def test_zipf_two_classes_pmf():
    assert zipf_pmf(1.0, 2) == pytest.approx([2 / 3, 1 / 3], abs=1e-15)


def test_zipf_pmf_matches_direct_summation():
    assert zipf_pmf(1.2, 100) == pytest.approx(zipf_pmf_by_summation(1.2, 100), rel=1e-12)


def test_zipf_goodness_of_fit():
    rng = np.random.default_rng(7)
    n = 100_000
    ranks = np.array([zipf_sample(1.2, 100, rng) for _ in range(n)])
    counts = np.bincount(ranks, minlength=101)[1:]
    expected = n * np.array(zipf_pmf_by_summation(1.2, 100))
    assert stats.chisquare(counts, expected).pvalue > 0.01


@pytest.mark.parametrize("exponent,size", [(0, 10), (-1.0, 10), (1.0, 0)])
def test_zipf_rejects_bad_parameters(exponent, size, rng):
    with pytest.raises(ConfigError):
        zipf_sample(exponent, size, rng)


def test_zipf_popularity_ordering():
    rng = np.random.default_rng(3)
    n = 20_000
    counts = np.bincount([zipf_sample(1.2, 20, rng) for _ in range(n)], minlength=21)[1:]
    sigma = np.sqrt(counts + 1.0)
    # nonincreasing up to 3 sigma noise between neighbours
    assert np.all(counts[1:] <= counts[:-1] + 3 * (sigma[1:] + sigma[:-1]))


@given(st.floats(0.1, 3.0), st.integers(1, 50), st.integers(0, 2**32))
@settings(max_examples=50, deadline=None)
def test_zipf_sample_in_range(exponent, size, seed):
    r = zipf_sample(exponent, size, np.random.default_rng(seed))
    assert 1 <= r <= size


def test_catalog_single():
    cat = build_catalog(1, 8, seed=7)
    assert len(cat) == 1
    assert np.linalg.norm(cat[0].prototype) > 0


def test_catalog_deterministic():
    a, b = build_catalog(30, 16, 5), build_catalog(30, 16, 5)
    assert all(np.array_equal(x.prototype, y.prototype) for x, y in zip(a, b))


def test_catalog_separation_exhaustive():
    cat = build_catalog(50, 64, 11)
    worst = -1.0
    for i in range(50):
        for j in range(i + 1, 50):
            worst = max(worst, float(np.dot(cat[i].prototype, cat[j].prototype)))
    assert worst < 0.9
    assert len({c.class_id for c in cat}) == 50


def test_catalog_impossible_separation():
    with pytest.raises(ConfigError, match="dimension"):
        build_catalog(40, 2, 0)


def test_catalog_rejects_tiny_dimension():
    with pytest.raises(ConfigError):
        build_catalog(3, 1, 0)


def test_feature_vector_rejects_zero():
    with pytest.raises(UsageError):
        make_feature_vector([0.0, 0.0, 0.0])


def test_task_needs_segments():
    with pytest.raises(UsageError):
        Task(0, 0, (), 0, 1)


def test_generate_one_task():
    cfg = WorkloadConfig(num_tasks=1, dimension=8, catalog_size=5)
    tasks = generate_workload(cfg, build_catalog(5, 8, 0))
    assert len(tasks) == 1


def test_forced_full_redundancy():
    cfg = WorkloadConfig(num_tasks=10, dimension=8, catalog_size=5, duplicate_probability=1.0)
    tasks = generate_workload(cfg, build_catalog(5, 8, 0))
    first = {id(s) for s in tasks[0].segments}
    for t in tasks[1:]:
        for s in t.segments:
            assert id(s) in first


def test_zero_noise_equals_prototype():
    cat = build_catalog(10, 16, 2)
    cfg = WorkloadConfig(num_tasks=30, dimension=16, catalog_size=10,
                         perturbation_sigma=0.0, duplicate_probability=0.0)
    for t in generate_workload(cfg, cat):
        for s in t.segments:
            assert np.array_equal(s.features, cat[s.truth_label].prototype)


def test_workload_invariants():
    cat = build_catalog(20, 16, 1)
    cfg = WorkloadConfig(num_tasks=50, dimension=16, catalog_size=20, segments_per_task=(2, 4))
    tasks = generate_workload(cfg, cat)
    assert [t.task_id for t in tasks] == list(range(50))
    assert all(a.release_time <= b.release_time for a, b in zip(tasks, tasks[1:]))
    for t in tasks:
        assert 2 <= len(t.segments) <= 4
        assert t.input_size == sum(s.size for s in t.segments)
        assert all(0 <= s.truth_label < 20 for s in t.segments)


def test_workload_deterministic():
    cat = build_catalog(20, 16, 1)
    cfg = WorkloadConfig(num_tasks=40, dimension=16, catalog_size=20, seed=99)
    assert workload_fingerprint(generate_workload(cfg, cat)) == \
        workload_fingerprint(generate_workload(cfg, cat))


def test_redundancy_all_distinct():
    assert measure_redundancy_rate([_task([i]) for i in range(10)]) == 0.0


def test_redundancy_all_same():
    assert measure_redundancy_rate([_task([3]) for _ in range(10)]) == pytest.approx(0.9)


def test_redundancy_against_hash_set_count():
    cat = build_catalog(100, 64, 0)
    cfg = WorkloadConfig(num_tasks=100, segments_per_task=(1, 1), duplicate_probability=0.0)
    tasks = generate_workload(cfg, cat)
    seen, total = set(), 0
    for t in tasks:
        for s in t.segments:
            seen.add(s.truth_label)
            total += 1
    rate = measure_redundancy_rate(tasks)
    assert rate == 1 - len(seen) / total
    assert 0 < rate < 1


def test_redundancy_empty():
    with pytest.raises(UsageError):
        measure_redundancy_rate([])


def test_redundancy_monotone_in_duplicate_probability():
    cat = build_catalog(100, 64, 0)
    medians = []
    for p in (0.0, 0.2, 0.4, 0.6, 0.8):
        rates = [measure_redundancy_rate(generate_workload(
            WorkloadConfig(duplicate_probability=p, seed=s), cat)) for s in range(9)]
        medians.append(np.median(rates))
    assert all(a <= b for a, b in zip(medians, medians[1:]))


@pytest.mark.parametrize("field,value", [
    ("num_tasks", 0), ("num_users", 0), ("zipf_exponent", -1.0),
    ("duplicate_probability", 1.5), ("perturbation_sigma", -0.1),
    ("segments_per_task", (3, 2)),
])
def test_config_validation_names_field(field, value):
    with pytest.raises(ConfigError) as e:
        WorkloadConfig(**{field: value})
    assert e.value.field == field
