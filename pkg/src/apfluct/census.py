"""Ordered pairs of APs counted by intersection size.

For lengths ell >= ell' the profile ``counts[r]`` is the number of ordered
pairs (T, T') of an ell-AP and an ell'-AP in [n] with ``|T & T'| = r``.

Three independent routes are provided:

* :func:`census_bruteforce` intersects the element sets of every pair.
* :func:`census_fast` uses the lcm structure of two progressions.  Common
  elements of APs with differences ``g*a`` and ``g*b`` (``gcd(a, b) = 1``) form
  an AP of difference ``g*a*b``, so an intersection of size >= 2 forces
  ``a <= ell' - 1`` and ``b <= ell - 1``.  Each such block sums in closed form
  over ``g``; the r = 1 count then follows from the point-degree identity and
  r = 0 from the partition identity.
* :func:`positional_sum` evaluates the quadruple sum over positions and
  differences directly, summing over the second difference in closed form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Optional, Tuple

import numpy as np

from .progressions import (
    DomainError,
    ResourceError,
    check_lengths,
    checked_int128,
    count_aps,
    enumerate_aps,
    max_diff,
)

DEFAULT_BUDGET = 10**8

# matmul chunk size (rows x columns of the intersection block)
_BLOCK_ENTRIES = 1 << 23


@dataclass(frozen=True)
class PairCensus:
    n: int
    ell: int
    ell_prime: int
    counts: Tuple[int, ...]

    @property
    def loose(self) -> int:
        return self.counts[1]

    @property
    def overlap(self) -> int:
        return self.counts[self.ell_prime]

    @property
    def positional_sum(self) -> int:
        return sum(r * c for r, c in enumerate(self.counts))

    @property
    def total(self) -> int:
        return sum(self.counts)


def _check_pair(n, ell, ell_prime):
    check_lengths(n, ell)
    check_lengths(n, ell_prime)
    if ell_prime > ell:
        raise DomainError(f"need ell' <= ell, got ell={ell} ell'={ell_prime}")


def _indicator(aps, n: int) -> np.ndarray:
    out = np.zeros((len(aps), n), dtype=np.float32)
    for row, ap in enumerate(aps):
        out[row, ap.start - 1 : ap.last : ap.diff] = 1.0
    return out


def _histogram(left: np.ndarray, right: np.ndarray, size: int) -> np.ndarray:
    """Histogram of |T & T'| over all rows of ``left`` x rows of ``right``."""
    hist = np.zeros(size, dtype=np.int64)
    if len(left) == 0 or len(right) == 0:
        return hist
    step = max(1, _BLOCK_ENTRIES // len(right))
    for lo in range(0, len(left), step):
        inter = left[lo : lo + step] @ right.T
        hist += np.bincount(inter.astype(np.int64).ravel(), minlength=size)[:size]
    return hist


def census_bruteforce(
    n: int, ell: int, ell_prime: int, budget: Optional[int] = DEFAULT_BUDGET
) -> PairCensus:
    """Exact profile by intersecting the element sets of every ordered pair.

    Raises ResourceError when the number of pairs exceeds ``budget``
    (pass ``budget=None`` to lift the limit).
    """
    _check_pair(n, ell, ell_prime)
    first, second = enumerate_aps(n, ell), enumerate_aps(n, ell_prime)
    pairs = len(first) * len(second)
    if budget is not None and pairs > budget:
        raise ResourceError(
            f"{pairs} pair comparisons exceed the budget {budget}; use census_fast"
        )
    hist = _histogram(_indicator(first, n), _indicator(second, n), ell_prime + 1)
    return PairCensus(n, ell, ell_prime, tuple(int(c) for c in hist))


def census_bruteforce_sweep(
    n_max: int, ell: int, ell_prime: int, budget: Optional[int] = None
) -> Iterator[PairCensus]:
    """Brute-force profiles for every n = ell, ..., n_max.

    A pair belongs to the census of [n] iff both APs end at or before n, so each
    ordered pair is intersected exactly once, when the later of the two last
    elements is reached.
    """
    _check_pair(n_max, ell, ell_prime)
    first = sorted(enumerate_aps(n_max, ell), key=lambda t: (t.last, t.diff))
    second = sorted(enumerate_aps(n_max, ell_prime), key=lambda t: (t.last, t.diff))
    pairs = len(first) * len(second)
    if budget is not None and pairs > budget:
        raise ResourceError(f"{pairs} pair comparisons exceed the budget {budget}")
    m1, m2 = _indicator(first, n_max), _indicator(second, n_max)
    ends1 = np.searchsorted([t.last for t in first], np.arange(n_max + 1), side="right")
    ends2 = np.searchsorted([t.last for t in second], np.arange(n_max + 1), side="right")
    hist = np.zeros(ell_prime + 1, dtype=np.int64)
    for n in range(1, n_max + 1):
        a0, a1 = ends1[n - 1], ends1[n]
        b0, b1 = ends2[n - 1], ends2[n]
        # new ell-APs against all ell'-APs in [n], then old ell-APs against new ell'-APs
        hist += _histogram(m1[a0:a1, :n], m2[:b1, :n], ell_prime + 1)
        hist += _histogram(m1[:a0, :n], m2[b0:b1, :n], ell_prime + 1)
        if n >= ell:
            yield PairCensus(n, ell, ell_prime, tuple(int(c) for c in hist))


def point_degrees(n: int, ell: int) -> np.ndarray:
    """``g(m)`` for m = 1..n: the number of ell-APs in [n] containing m."""
    check_lengths(n, ell)
    m = np.arange(1, n + 1, dtype=np.int64)
    big = np.int64(n)
    out = np.zeros(n, dtype=np.int64)
    for pos in range(1, ell + 1):
        below = (m - 1) // (pos - 1) if pos > 1 else np.full(n, big)
        above = (n - m) // (ell - pos) if pos < ell else np.full(n, big)
        out += np.minimum(below, above)
    return out


def point_degree(n: int, ell: int, m: int) -> int:
    """Number of ell-APs in [n] that contain m."""
    check_lengths(n, ell)
    if not 1 <= m <= n:
        raise DomainError(f"need 1 <= m <= n, got m={m}")
    total = 0
    for pos in range(1, ell + 1):
        below = (m - 1) // (pos - 1) if pos > 1 else n
        above = (n - m) // (ell - pos) if pos < ell else n
        total += min(below, above)
    return total


def point_degree_sum(n: int, ell: int, ell_prime: int) -> int:
    """sum_m g_ell(m) * g_ell'(m), the shared-point count of ordered pairs."""
    g1, g2 = point_degrees(n, ell), point_degrees(n, ell_prime)
    return checked_int128(sum((g1 * g2).tolist()), "point-degree sum")


def overlap_count(n: int, ell: int, ell_prime: int) -> int:
    """Ordered pairs with T' inside T: A_ell(n) * A_ell'(ell)."""
    _check_pair(n, ell, ell_prime)
    return checked_int128(count_aps(n, ell) * count_aps(ell, ell_prime))


def _sum_positive_linear(c, e, lo, hi):
    """sum_{x=lo}^{hi} max(c - e*x, 0) elementwise, for e >= 0 and c - e*x non-increasing."""
    safe_e = np.where(e > 0, e, 1)
    top = np.where(e > 0, np.minimum(hi, np.floor_divide(c, safe_e)), hi)
    top = np.where((e == 0) & (c <= 0), lo - 1, top)
    cnt = np.maximum(top - lo + 1, 0)
    # sum of (c - e*x) over x = lo..top equals cnt*c - e*(lo+top)*cnt/2
    return cnt * c - e * ((lo + top) * cnt // 2)


def positional_sum(n: int, ell: int, ell_prime: int) -> int:
    """sum over (i, i', d, d') of (n - max{(i-1)d, (i'-1)d'} - max{(ell-i)d, (ell'-i')d'})_+.

    One term per (pair, shared point), so the result is sum_r r * counts[r].
    The inner sum over d' is piecewise linear and is evaluated in closed form.
    """
    _check_pair(n, ell, ell_prime)
    dmax, dmax2 = max_diff(n, ell), max_diff(n, ell_prime)
    delta = np.arange(1, dmax + 1, dtype=np.int64)
    total = 0
    for pos in range(1, ell + 1):
        u = (pos - 1) * delta
        v = (ell - pos) * delta
        for pos2 in range(1, ell_prime + 1):
            b, d = pos2 - 1, ell_prime - pos2
            # d' <= t1 keeps max{u, b d'} = u; d' <= t2 keeps max{v, d d'} = v
            t1 = u // b if b else np.full_like(delta, dmax2)
            t2 = v // d if d else np.full_like(delta, dmax2)
            t1, t2 = np.minimum(t1, dmax2), np.minimum(t2, dmax2)
            s1, s2 = np.minimum(t1, t2), np.maximum(t1, t2)
            pieces = (
                (np.ones_like(delta), s1, n - u - v, np.zeros_like(delta)),
                (
                    s1 + 1,
                    s2,
                    np.where(t1 < t2, n - v, n - u),
                    np.where(t1 < t2, b, d),
                ),
                (s2 + 1, np.full_like(delta, dmax2), np.full_like(delta, n), np.full_like(delta, b + d)),
            )
            for lo, hi, c, e in pieces:
                part = _sum_positive_linear(c, e, lo, hi)
                total += sum(np.where(hi >= lo, part, 0).tolist())
    return checked_int128(total, "positional sum")


def _multi_intersection_counts(n: int, ell: int, ell_prime: int) -> list:
    """counts[r] for r >= 2 via the bounded (a, b) = (d/g, d'/g) blocks."""
    counts = [0] * (ell_prime + 1)
    for a in range(1, ell_prime):
        for b in range(1, ell):
            if math.gcd(a, b) != 1:
                continue
            # common elements sit every b places in T and every a places in T'
            for i0 in range(ell):
                for j0 in range(ell_prime):
                    if i0 >= b and j0 >= a:
                        continue  # x0 would not be the smallest common element
                    r = 1 + min((ell - 1 - i0) // b, (ell_prime - 1 - j0) // a)
                    if r < 2:
                        continue
                    k = max(i0 * a, j0 * b) + max((ell - 1 - i0) * a, (ell_prime - 1 - j0) * b)
                    g = (n - 1) // k
                    counts[r] += g * n - k * (g * (g + 1) // 2)
    return counts


def census_fast(n: int, ell: int, ell_prime: int) -> PairCensus:
    """Exact profile without enumerating pairs; agrees with census_bruteforce."""
    _check_pair(n, ell, ell_prime)
    counts = _multi_intersection_counts(n, ell, ell_prime)
    shared = point_degree_sum(n, ell, ell_prime)
    counts[1] = shared - sum(r * c for r, c in enumerate(counts) if r >= 2)
    counts[0] = count_aps(n, ell) * count_aps(n, ell_prime) - sum(counts[1:])
    return PairCensus(n, ell, ell_prime, tuple(checked_int128(c) for c in counts))


def other_pair_ratios(census: PairCensus) -> dict:
    """counts[r] / (n^2 ell ell'^2) for 2 <= r <= ell' - 1 (diagnostic only)."""
    scale = census.n**2 * census.ell * census.ell_prime**2
    return {r: census.counts[r] / scale for r in range(2, census.ell_prime)}
