"""Exact second moments, the subset-enumeration oracle, and Poisson/normal diagnostics.

Everything here is exact when ``p`` is a Fraction.  Standard deviations are
square roots of rationals, so standardized moments are carried as
:class:`ScaledMoment` values, rational combinations of ``1``, ``v1^-1/2``,
``v2^-1/2`` and ``(v1 v2)^-1/2``.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional, Tuple

import numpy as np

from .census import PairCensus, census_fast
from .progressions import (
    DomainError,
    ResourceError,
    check_lengths,
    check_probability,
    count_aps,
    enumerate_aps,
    expected_count,
)

ORACLE_MAX_N = 24

_ORACLE_CHUNK = 1 << 20


def _ordered(ell, ell_prime):
    return (ell, ell_prime) if ell >= ell_prime else (ell_prime, ell)


def exact_covariance(n: int, ell: int, ell_prime: int, p, census: Optional[PairCensus] = None):
    """Cov(X_ell, X_ell') = sum_{r>=1} P(r) (p^(ell+ell'-r) - p^(ell+ell')).

    Exact for Fraction ``p``, float arithmetic for float ``p``.
    """
    check_probability(p)
    ell, ell_prime = _ordered(ell, ell_prime)
    if census is None:
        census = census_fast(n, ell, ell_prime)
    full = p ** (ell + ell_prime)
    return sum(
        census.counts[r] * (p ** (ell + ell_prime - r) - full) for r in range(1, ell_prime + 1)
    )


def variance(n: int, ell: int, p):
    return exact_covariance(n, ell, ell, p)


def sigma(n: int, ell: int, p) -> float:
    return math.sqrt(variance(n, ell, p))


def exact_correlation(n: int, ell1: int, ell2: int, p) -> float:
    """Cov/(sigma1 sigma2) at finite n; NaN when either variance vanishes."""
    v1, v2 = variance(n, ell1, p), variance(n, ell2, p)
    if v1 == 0 or v2 == 0:
        return math.nan
    return float(exact_covariance(n, ell1, ell2, p)) / math.sqrt(float(v1) * float(v2))


@dataclass(frozen=True)
class ScaledMoment:
    """``sum_{(i,j)} coeffs[(i,j)] * v1^(-i/2) * v2^(-j/2)`` with i, j in {0, 1}."""

    coeffs: Tuple[Tuple[Tuple[int, int], Fraction], ...]
    v1: Fraction
    v2: Fraction

    def __float__(self):
        total = 0.0
        for (i, j), c in self.coeffs:
            total += float(c) / (math.sqrt(self.v1) ** i * math.sqrt(self.v2) ** j)
        return total

    def as_dict(self) -> Dict[Tuple[int, int], Fraction]:
        return dict(self.coeffs)

    @property
    def is_rational(self) -> bool:
        return all(c == 0 for key, c in self.coeffs if key != (0, 0))

    @property
    def rational(self) -> Fraction:
        if not self.is_rational:
            raise DomainError("moment has an irrational part")
        return self.as_dict().get((0, 0), Fraction(0))


def standardized_moment(central: Dict[Tuple[int, int], Fraction], v1, v2, k: int, u1, u2) -> ScaledMoment:
    """E[(u1 Y1/sigma1 + u2 Y2/sigma2)^k] from exact mixed central moments E[Y1^a Y2^b]."""
    v1, v2 = Fraction(v1), Fraction(v2)
    if v1 <= 0 or v2 <= 0:
        raise DomainError("standardization needs positive variances")
    u1, u2 = Fraction(u1), Fraction(u2)
    coeffs = {(0, 0): Fraction(0), (1, 0): Fraction(0), (0, 1): Fraction(0), (1, 1): Fraction(0)}
    for a in range(k + 1):
        b = k - a
        term = math.comb(k, a) * u1**a * u2**b * central[(a, b)]
        if term == 0:
            continue
        # sigma^-a = v^-(a//2) * v^-(a%2)/2
        term /= v1 ** (a // 2) * v2 ** (b // 2)
        coeffs[(a % 2, b % 2)] += term
    return ScaledMoment(tuple(sorted(coeffs.items())), v1, v2)


@dataclass(frozen=True)
class ExactDistribution:
    """Exact joint pmf of (X_ell1, X_ell2) on the listed support."""

    support: List[Tuple[int, int]]
    probs: List[Fraction]

    def mean(self, coord: int) -> Fraction:
        return sum((pr * pt[coord] for pt, pr in zip(self.support, self.probs)), Fraction(0))

    def central_moment(self, a: int, b: int) -> Fraction:
        m1, m2 = self.mean(0), self.mean(1)
        return sum(
            (pr * (x1 - m1) ** a * (x2 - m2) ** b for (x1, x2), pr in zip(self.support, self.probs)),
            Fraction(0),
        )

    def covariance(self) -> Fraction:
        return self.central_moment(1, 1)

    def variance(self, coord: int) -> Fraction:
        return self.central_moment(2, 0) if coord == 0 else self.central_moment(0, 2)

    def marginal(self, coord: int) -> Dict[int, Fraction]:
        out: Dict[int, Fraction] = {}
        for pt, pr in zip(self.support, self.probs):
            out[pt[coord]] = out.get(pt[coord], Fraction(0)) + pr
        return dict(sorted(out.items()))

    def standardized_moment(self, k: int, u1, u2) -> ScaledMoment:
        central = {(a, k - a): self.central_moment(a, k - a) for a in range(k + 1)}
        return standardized_moment(central, self.variance(0), self.variance(1), k, u1, u2)


def _popcount(x: np.ndarray) -> np.ndarray:
    x = x - ((x >> 1) & 0x55555555)
    x = (x & 0x33333333) + ((x >> 2) & 0x33333333)
    x = (x + (x >> 4)) & 0x0F0F0F0F
    return (x * 0x01010101 & 0xFFFFFFFF) >> 24


@lru_cache(maxsize=64)
def _subset_histogram(n: int, ell1: int, ell2: int) -> Dict[Tuple[int, int, int], int]:
    """#{S subset of [n] : (X_ell1(S), X_ell2(S), |S|) = key} by exhaustive enumeration."""
    masks1 = [ap.mask() for ap in enumerate_aps(n, ell1)]
    masks2 = [ap.mask() for ap in enumerate_aps(n, ell2)]
    w1, w2 = len(masks1) + 1, len(masks2) + 1
    hist = np.zeros(w1 * w2 * (n + 1), dtype=np.int64)
    total = 1 << n
    for lo in range(0, total, _ORACLE_CHUNK):
        sub = np.arange(lo, min(total, lo + _ORACLE_CHUNK), dtype=np.int64)
        x1 = np.zeros(len(sub), dtype=np.int64)
        x2 = np.zeros(len(sub), dtype=np.int64)
        for m in masks1:
            x1 += (sub & m) == m
        for m in masks2:
            x2 += (sub & m) == m
        key = (x1 * w2 + x2) * (n + 1) + _popcount(sub)
        hist += np.bincount(key, minlength=len(hist))
    out = {}
    for key in np.flatnonzero(hist).tolist():
        rest, size = divmod(key, n + 1)
        x1, x2 = divmod(rest, w2)
        out[(x1, x2, size)] = int(hist[key])
    return out


def exact_joint_distribution(n: int, ell1: int, ell2: int, p) -> ExactDistribution:
    """Exact pmf of (X_ell1, X_ell2) over all 2^n subsets; n <= 24."""
    check_lengths(n, ell1)
    check_lengths(n, ell2)
    check_probability(p)
    if n > ORACLE_MAX_N:
        raise ResourceError(f"subset enumeration is limited to n <= {ORACLE_MAX_N}, got {n}")
    p = Fraction(p)
    a, b = p.numerator, p.denominator
    numer: Dict[Tuple[int, int], int] = {}
    for (x1, x2, size), cnt in _subset_histogram(n, ell1, ell2).items():
        numer[(x1, x2)] = numer.get((x1, x2), 0) + cnt * a**size * (b - a) ** (n - size)
    denom = b**n
    support = sorted(k for k, v in numer.items() if v)
    return ExactDistribution(support, [Fraction(numer[k], denom) for k in support])


def improved_poisson_cutoffs(n: int, ell: int) -> Dict[str, float]:
    return {
        "pair_cutoff": n ** (-3 / (2 * ell - 1)),
        "length_cutoff": n ** (-2 / (ell + 1)) * ell ** (-3 / (ell + 1)),
    }


@dataclass(frozen=True)
class BoundReport:
    n: int
    ell: int
    p: float
    delta1: float
    delta2: float
    tv_bound: float
    poisson_param: float
    mikhailov_m: float
    mikhailov_q: float
    sigma: float
    s: int
    criterion_ratio: float
    degenerate: bool
    cutoffs: Dict[str, float] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return asdict(self)


def chen_stein_quantities(n: int, ell: int, p, census: Optional[PairCensus] = None):
    """(delta1, delta2, lambda): exact for Fraction p."""
    check_probability(p)
    if census is None:
        census = census_fast(n, ell, ell)
    delta1 = p ** (2 * ell) * sum(census.counts[1:])
    delta2 = sum(census.counts[r] * p ** (2 * ell - r) for r in range(1, ell))
    return delta1, delta2, expected_count(n, ell, p)


def mikhailov_diagnostic(n: int, ell: int, p, s: int = 3, census: Optional[PairCensus] = None):
    """(M, Q, sigma, ratio, degenerate) with ratio = (M/sigma)(Q/sigma)^(s-1)."""
    if s <= 2:
        raise DomainError(f"need s > 2, got {s}")
    m = float(expected_count(n, ell, p))
    q = n * float(p) ** (ell - 1) * ell + ell**4
    var = float(exact_covariance(n, ell, ell, p, census))
    sd = math.sqrt(var) if var > 0 else 0.0
    if sd == 0:
        return m, q, 0.0, math.inf, True
    return m, q, sd, (m / sd) * (q / sd) ** (s - 1), False


def chen_stein_bound(n: int, ell: int, p, s: int = 3) -> BoundReport:
    census = census_fast(n, ell, ell)
    d1, d2, lam = chen_stein_quantities(n, ell, p, census)
    m, q, sd, ratio, degenerate = mikhailov_diagnostic(n, ell, p, s, census)
    return BoundReport(
        n=n,
        ell=ell,
        p=float(p),
        delta1=float(d1),
        delta2=float(d2),
        tv_bound=float(d1 + d2),
        poisson_param=float(lam),
        mikhailov_m=m,
        mikhailov_q=q,
        sigma=sd,
        s=s,
        criterion_ratio=ratio,
        degenerate=degenerate,
        cutoffs=improved_poisson_cutoffs(n, ell),
    )
