import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats

from apfluct.progressions import DomainError, ModelParams, count_aps, expected_count
from apfluct.simulate import (
    _count_dense,
    _count_sparse,
    count_in_subset,
    empirical_correlation,
    empirical_pmf,
    ks_distance,
    mix_seed,
    run_experiment,
    sample_subset,
    tv_distance,
)
from oracles import naive_count_in_set


def test_sample_edges_and_determinism():
    assert sample_subset(50, 1, 3).all()
    assert not sample_subset(50, 0, 3).any()
    for p in (0.05, 0.5):
        assert np.array_equal(sample_subset(200, p, 11), sample_subset(200, p, 11))
        assert not np.array_equal(sample_subset(200, p, 11), sample_subset(200, p, 12))


def test_mix_seed_reference_values():
    # SplitMix64 finalizer of 0x9E3779B97F4A7C15: first output of a SplitMix64 stream seeded 0
    assert mix_seed(0, 0) == 0xE220A8397B1DCDAF
    assert len({mix_seed(7, i) for i in range(1000)}) == 1000
    assert all(0 <= mix_seed(2**64 - 1, i) < 2**64 for i in range(10))


def test_count_examples():
    mask = np.zeros(5, dtype=bool)
    mask[[0, 1, 2, 4]] = True
    assert count_in_subset(mask, 3) == 2
    assert count_in_subset(np.ones(30, dtype=bool), 4) == count_aps(30, 4)
    assert count_in_subset(np.zeros(30, dtype=bool), 3) == 0


@given(st.integers(10, 200), st.floats(0.02, 0.9), st.integers(3, 5), st.integers(0, 2**32))
@settings(max_examples=200, deadline=None)
def test_counting_paths_agree_with_naive(n, p, ell, seed):
    mask = sample_subset(n, p, seed)
    elements = np.flatnonzero(mask)
    expected = naive_count_in_set((elements + 1).tolist(), ell)
    assert count_in_subset(mask, ell) == expected
    assert _count_dense(mask, ell) == expected
    if len(elements) >= 2:
        assert _count_sparse(elements, mask, ell) == expected


def test_threads_do_not_change_batch():
    params = ModelParams(2000, 0.03, 4, 3)
    a = run_experiment(params, 64, 99, threads=1)
    b = run_experiment(params, 64, 99, threads=6)
    assert np.array_equal(a.counts, b.counts)
    assert np.array_equal(a.standardized, b.standardized)


def test_empty_batch():
    b = run_experiment(ModelParams(100, 0.1, 3, 3), 0, 1)
    assert b.counts.shape == (0, 2)
    with pytest.raises(DomainError):
        empirical_correlation(b)


def test_sampling_law():
    # inclusion frequency per site matches p for both sampling paths
    for p in (0.04, 0.3):
        masks = np.array([sample_subset(400, p, mix_seed(5, i)) for i in range(3000)])
        freq = masks.mean()
        assert abs(freq - p) < 4 * math.sqrt(p * (1 - p) / masks.size)
        sizes = masks.sum(axis=1)
        assert abs(sizes.var() - 400 * p * (1 - p)) < 0.15 * 400 * p * (1 - p)


def test_mean_in_sparse_regime():
    n = 10**4
    p = (2 / count_aps(n, 3)) ** (1 / 3)
    b = run_experiment(ModelParams(n, p, 3, 3), 10**4, 424242, threads=4)
    mean = float(expected_count(n, 3, p))
    se = b.sigmas[0] / math.sqrt(b.replicas)
    assert abs(b.counts[:, 0].mean() - mean) < 3 * se


def test_ks_construction():
    m = 500
    q = stats.norm.ppf(np.arange(1, m + 1) / (m + 1))
    assert ks_distance(q) <= 1 / (m + 1) + 1e-12
    with pytest.raises(DomainError):
        ks_distance([])


def test_tv_distance():
    lam = 2.5
    ks = np.arange(80)
    pmf = dict(zip(ks.tolist(), stats.poisson.pmf(ks, lam)))
    assert tv_distance(pmf, lam) < 1e-12
    assert tv_distance({0: 1.0}, 0.0) == 0
    assert tv_distance({5: 1.0}, lam) == pytest.approx(1 - stats.poisson.pmf(5, lam))
    with pytest.raises(DomainError):
        tv_distance({}, lam)
    assert empirical_pmf([1, 1, 2, 4]) == {1: 0.5, 2: 0.25, 4: 0.25}


def test_correlation_of_duplicates():
    x = np.random.default_rng(0).normal(size=300)
    assert empirical_correlation(np.column_stack([x, x])) == pytest.approx(1)
    assert empirical_correlation(np.column_stack([x, -x])) == pytest.approx(-1)
