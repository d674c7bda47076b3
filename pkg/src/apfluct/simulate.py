"""Seeded sampling of [n]_p, AP counting in sampled sets, and goodness-of-fit statistics.

Replica ``i`` of a run with master seed ``s`` draws from numpy's PCG64 seeded
with ``mix_seed(s, i)``, the SplitMix64 finalizer applied to
``s + (i + 1) * 0x9E3779B97F4A7C15 mod 2^64``.  Results therefore depend only
on (params, replicas, master seed), never on the thread count.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Mapping, Sequence, Union

import numpy as np
from scipy import special, stats

from .moments import exact_covariance
from .progressions import DomainError, ModelParams, check_probability, expected_count

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15

# below this inclusion probability a sample is drawn as (binomial size, uniform subset)
SPARSE_SAMPLING_P = 0.1

POISSON_TAIL = 1e-12


def mix_seed(master: int, index: int) -> int:
    z = (master + (index + 1) * GOLDEN) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def sample_subset(n: int, p, seed: int) -> np.ndarray:
    """Boolean mask over [n]: entry m-1 is True iff m was kept."""
    check_probability(p)
    p = float(p)
    rng = np.random.Generator(np.random.PCG64(seed))
    if p <= SPARSE_SAMPLING_P:
        mask = np.zeros(n, dtype=bool)
        size = rng.binomial(n, p)
        mask[rng.choice(n, size=size, replace=False)] = True
        return mask
    return rng.random(n) < p


def _count_sparse(elements: np.ndarray, mask: np.ndarray, ell: int) -> int:
    # every AP is fixed by its two smallest elements; walk the rest
    n = len(mask)
    i, j = np.triu_indices(len(elements), k=1)
    a, b = elements[i], elements[j]
    step = b - a
    alive = np.ones(len(a), dtype=bool)
    for pos in range(2, ell):
        nxt = a + pos * step
        inside = nxt < n
        alive &= inside
        alive[inside] &= mask[nxt[inside]]
    return int(alive.sum())


def _count_dense(mask: np.ndarray, ell: int) -> int:
    n = len(mask)
    total = 0
    for diff in range(1, (n - 1) // (ell - 1) + 1):
        span = (ell - 1) * diff
        window = mask[: n - span].copy()
        for pos in range(1, ell):
            window &= mask[pos * diff : n - span + pos * diff]
        total += int(window.sum())
    return total


def count_in_subset(mask: np.ndarray, ell: int) -> int:
    """Number of ell-APs entirely inside the set encoded by ``mask``."""
    mask = np.asarray(mask, dtype=bool)
    n = len(mask)
    if ell < 3:
        raise DomainError("AP length must be at least 3")
    elements = np.flatnonzero(mask)
    if len(elements) < ell:
        return 0
    if len(elements) <= n / max(math.log(n), 1.0):
        return _count_sparse(elements, mask, ell)
    return _count_dense(mask, ell)


@dataclass(frozen=True)
class SampleBatch:
    params: ModelParams
    replicas: int
    master_seed: int
    counts: np.ndarray  # shape (replicas, 2), columns X_ell1, X_ell2
    standardized: np.ndarray  # same shape, (X - E X) / sigma with exact moments
    means: tuple
    sigmas: tuple


def exact_mean_sigma(n: int, ell: int, p):
    mean = float(expected_count(n, ell, p))
    var = float(exact_covariance(n, ell, ell, p))
    return mean, math.sqrt(var) if var > 0 else 0.0


def run_experiment(params: ModelParams, replicas: int, master_seed: int, threads: int = 1) -> SampleBatch:
    if replicas < 0:
        raise DomainError("replicas must be non-negative")
    n, p, ell1, ell2 = params.n, params.p, params.ell1, params.ell2

    def one(i):
        mask = sample_subset(n, p, mix_seed(master_seed, i))
        x1 = count_in_subset(mask, ell1)
        return x1, x1 if ell2 == ell1 else count_in_subset(mask, ell2)

    if threads > 1 and replicas > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(one, range(replicas), chunksize=max(1, replicas // (4 * threads))))
    else:
        rows = [one(i) for i in range(replicas)]
    counts = np.array(rows, dtype=np.int64).reshape(replicas, 2)
    m1, s1 = exact_mean_sigma(n, ell1, p)
    m2, s2 = exact_mean_sigma(n, ell2, p)
    with np.errstate(divide="ignore", invalid="ignore"):
        std = (counts - np.array([m1, m2])) / np.array([s1, s2])
    return SampleBatch(params, replicas, master_seed, counts, std, (m1, m2), (s1, s2))


def ks_distance(samples: Sequence[float]) -> float:
    """sup |F_emp - Phi| for standardized samples."""
    x = np.sort(np.asarray(samples, dtype=float))
    m = len(x)
    if m == 0:
        raise DomainError("KS distance needs at least one sample")
    cdf = special.ndtr(x)
    upper = np.arange(1, m + 1) / m - cdf
    lower = cdf - np.arange(0, m) / m
    return float(max(upper.max(), lower.max()))


def empirical_pmf(values: Sequence[int]) -> dict:
    values = np.asarray(values, dtype=np.int64)
    if len(values) == 0:
        raise DomainError("empirical pmf needs at least one sample")
    keys, cnt = np.unique(values, return_counts=True)
    return {int(k): float(c) / len(values) for k, c in zip(keys, cnt)}


def tv_distance(pmf: Union[Mapping[int, float], Sequence[float]], lam: float) -> float:
    """(1/2) sum_k |pmf(k) - Po(lam)(k)|, Poisson truncated where its tail drops below 1e-12."""
    if not isinstance(pmf, Mapping):
        pmf = dict(enumerate(pmf))
    if not pmf:
        raise DomainError("TV distance needs a non-empty pmf")
    top = int(stats.poisson.isf(POISSON_TAIL, lam)) + 1 if lam > 0 else 0
    top = max(top, max(pmf))
    ks = np.arange(top + 1)
    po = stats.poisson.pmf(ks, lam)
    emp = np.zeros(top + 1)
    for k, v in pmf.items():
        if k < 0:
            raise DomainError("pmf support must be non-negative")
        emp[k] += v
    return float(0.5 * np.abs(emp - po).sum())


def empirical_correlation(batch: Union[SampleBatch, np.ndarray]) -> float:
    """Pearson correlation of the two standardized coordinates."""
    data = batch.standardized if isinstance(batch, SampleBatch) else np.asarray(batch, dtype=float)
    if data.ndim != 2 or len(data) == 0:
        raise DomainError("correlation needs a non-empty batch of pairs")
    x, y = data[:, 0] - data[:, 0].mean(), data[:, 1] - data[:, 1].mean()
    denom = math.sqrt(float(x @ x) * float(y @ y))
    if denom == 0:
        return math.nan
    return float(x @ y) / denom
