"""Exploration of AP tuples into connected components, and exact joint moments.

A tuple of APs is read in a fixed total order: longer APs first, then by
(diff, start).  Exploration repeatedly takes the smallest active AP, records
how many of its elements were already seen (``t``) and its length (``s``),
and activates every still-inactive AP that meets it.  When nothing is active
the smallest inactive AP opens a new component with ``t = 0``.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .moments import ScaledMoment, exact_correlation, standardized_moment, variance
from .progressions import DomainError, Progression, ResourceError, double_factorial, enumerate_aps

MAX_TUPLE = 12
DEFAULT_MOMENT_BUDGET = 10**6


def pi_key(ap: Progression):
    return (-ap.length, ap.diff, ap.start)


@dataclass(frozen=True)
class ValidityFlags:
    sizes: bool
    bounds: bool
    zero_rule: bool
    no_consecutive_zeros: bool
    last_positive: bool
    zero_count: bool
    matching: bool

    @property
    def contributing(self) -> bool:
        """Necessary conditions for a non-zero centred product expectation."""
        return (
            self.sizes
            and self.bounds
            and self.zero_rule
            and self.no_consecutive_zeros
            and self.last_positive
        )

    @property
    def all_valid(self) -> bool:
        return self.contributing and self.zero_count


@dataclass(frozen=True)
class ExplorationResult:
    ordered: Tuple[Progression, ...]
    t: Tuple[int, ...]
    s: Tuple[int, ...]
    component_starts: Tuple[int, ...]
    valid: ValidityFlags


def validate_type_vectors(t: Sequence[int], s: Sequence[int], ell1: int, ell2: int) -> ValidityFlags:
    if len(t) != len(s):
        raise DomainError("type vectors must have equal length")
    k = len(t)
    zeros = [j for j in range(k) if t[j] == 0]
    zero_rule = all(s[j] == ell1 or all(x == ell2 for x in s[j:]) for j in zeros)
    # zeros at every even position with positive entries between: pairs only
    matching = k % 2 == 0 and k > 0 and zeros == list(range(0, k, 2)) and all(t[j] > 0 for j in range(1, k, 2))
    return ValidityFlags(
        sizes=all(x in (ell1, ell2) for x in s),
        bounds=all(0 <= a <= b for a, b in zip(t, s)),
        zero_rule=zero_rule,
        no_consecutive_zeros=all(t[j] + t[j + 1] > 0 for j in range(k - 1)),
        last_positive=k > 0 and t[-1] > 0,
        zero_count=len(zeros) <= math.ceil(k / 2) - 1 or matching,
        matching=matching,
    )


def explore(aps: Sequence[Progression], ell1: int, ell2: int) -> ExplorationResult:
    for ap in aps:
        if ap.length not in (ell1, ell2):
            raise DomainError(f"AP length {ap.length} is neither {ell1} nor {ell2}")
    sets = [frozenset(ap.elements()) for ap in aps]
    inactive = sorted(range(len(aps)), key=lambda i: pi_key(aps[i]))
    active: List[int] = []
    seen: set = set()
    order, t, starts = [], [], []
    while inactive or active:
        if not active:
            starts.append(len(order))
            active.append(inactive.pop(0))
        cur = min(active, key=lambda i: pi_key(aps[i]))
        active.remove(cur)
        t.append(len(sets[cur] & seen))
        seen |= sets[cur]
        order.append(cur)
        hits = [i for i in inactive if sets[i] & sets[cur]]
        active.extend(hits)
        inactive = [i for i in inactive if i not in hits]
    ordered = tuple(aps[i] for i in order)
    s = tuple(ap.length for ap in ordered)
    return ExplorationResult(ordered, tuple(t), s, tuple(starts), validate_type_vectors(t, s, ell1, ell2))


def _product_polynomial(masks: Sequence[int], sizes: Sequence[int]) -> Dict[int, int]:
    """Integer coefficients of E prod(1{T_i in S} - p^s_i) as a polynomial in p.

    Inclusion-exclusion over the set R of factors taken as -p^s_i: the rest
    contribute p^|union|.
    """
    k = len(masks)
    poly: Dict[int, int] = {}
    for r in range(1 << k):
        union, deg, sign = 0, 0, 1
        for i in range(k):
            if r >> i & 1:
                deg += sizes[i]
                sign = -sign
            else:
                union |= masks[i]
        e = deg + bin(union).count("1")
        poly[e] = poly.get(e, 0) + sign
    return {e: c for e, c in poly.items() if c}


def _evaluate(poly: Dict[int, int], p):
    return sum((c * p**e for e, c in poly.items()), Fraction(0) if isinstance(p, (int, Fraction)) else 0.0)


def centred_product_expectation(aps: Sequence[Progression], p, max_size: int = MAX_TUPLE):
    """Exact E prod_i (1{T_i in [n]_p} - p^|T_i|); Fraction for rational p."""
    if len(aps) > max_size:
        raise ResourceError(f"tuple of {len(aps)} APs exceeds the bound {max_size}")
    return _evaluate(_product_polynomial([ap.mask() for ap in aps], [ap.length for ap in aps]), p)


def intersection_graph(aps: Sequence[Progression]) -> List[List[int]]:
    sets = [set(ap.elements()) for ap in aps]
    return [[j for j in range(len(aps)) if j != i and sets[i] & sets[j]] for i in range(len(aps))]


def is_matching_tuple(aps: Sequence[Progression]) -> bool:
    """Every AP meets exactly one other position of the tuple."""
    return len(aps) > 0 and all(len(nb) == 1 for nb in intersection_graph(aps))


def perfect_matchings(k: int) -> List[Tuple[Tuple[int, int], ...]]:
    """All fixed-point-free involutions of range(k), as sorted pair lists."""
    if k % 2:
        return []

    def rec(items):
        if not items:
            yield ()
            return
        first = items[0]
        for j in range(1, len(items)):
            rest = items[1:j] + items[j + 1 :]
            for m in rec(rest):
                yield ((first, items[j]),) + m

    return list(rec(tuple(range(k))))


def dominant_moment(k: int, u1: float, u2: float, kappa: float) -> float:
    if k < 1:
        raise DomainError("k must be positive")
    if k % 2:
        return 0.0
    return double_factorial(k - 1) * (u1**2 + u2**2 + 2 * u1 * u2 * kappa) ** (k // 2)


def _multinomial(combo: Tuple[int, ...]) -> int:
    out = math.factorial(len(combo))
    for c in Counter(combo).values():
        out //= math.factorial(c)
    return out


def _has_isolated(masks: Sequence[int]) -> bool:
    for i, m in enumerate(masks):
        if not any(m & x for j, x in enumerate(masks) if j != i):
            return True
    return False


def _is_matching_masks(masks: Sequence[int]) -> bool:
    return all(sum(1 for j, x in enumerate(masks) if j != i and m & x) == 1 for i, m in enumerate(masks))


def mixed_central_moments(n: int, ell1: int, ell2: int, k: int, budget: Optional[int] = DEFAULT_MOMENT_BUDGET):
    """E[Y1^a Y2^(k-a)] as integer polynomials in p, split into matching and other tuples.

    Returns ``{(a, b): (matching_poly, rest_poly)}``.  Ordered tuples are grouped
    into multisets with multinomial weights; multisets with an AP that meets no
    other member are skipped since their centred product vanishes.
    """
    first, second = enumerate_aps(n, ell1), enumerate_aps(n, ell2)
    m1 = [ap.mask() for ap in first]
    m2 = [ap.mask() for ap in second]
    total = sum(math.comb(len(m1) + a - 1, a) * math.comb(len(m2) + k - a - 1, k - a) for a in range(k + 1))
    if budget is not None and total > budget:
        raise ResourceError(f"{total} tuple classes exceed the moment budget {budget}")
    out = {}
    for a in range(k + 1):
        b = k - a
        match: Dict[int, int] = {}
        rest: Dict[int, int] = {}
        for c1 in itertools.combinations_with_replacement(range(len(m1)), a):
            w1 = _multinomial(c1)
            for c2 in itertools.combinations_with_replacement(range(len(m2)), b):
                masks = [m1[i] for i in c1] + [m2[j] for j in c2]
                if _has_isolated(masks):
                    continue
                weight = w1 * _multinomial(c2)
                poly = _product_polynomial(masks, [ell1] * a + [ell2] * b)
                target = match if _is_matching_masks(masks) else rest
                for e, c in poly.items():
                    target[e] = target.get(e, 0) + weight * c
        out[(a, b)] = (match, rest)
    return out


@dataclass(frozen=True)
class MomentReport:
    k: int
    u1: Fraction
    u2: Fraction
    exact: ScaledMoment
    matching: ScaledMoment
    dominant: float
    residual: float
    dominant_formula: float
    kappa_hat: float


def exact_joint_moment(
    n: int, ell1: int, ell2: int, p, k: int, u1=1, u2=0, budget: Optional[int] = DEFAULT_MOMENT_BUDGET
) -> MomentReport:
    """E[(u1 Y1/sigma1 + u2 Y2/sigma2)^k] summed over k-tuples of APs, exact for rational p.

    ``dominant`` is the matching-tuple share, ``residual`` the rest, and
    ``dominant_formula`` the closed form at the finite-n correlation.
    """
    if k < 1:
        raise DomainError("k must be positive")
    p = Fraction(p)
    if ell1 == ell2:
        v1 = v2 = variance(n, ell1, p)
    else:
        v1, v2 = variance(n, ell1, p), variance(n, ell2, p)
    polys = mixed_central_moments(n, ell1, ell2, k, budget)
    full = {key: _evaluate(mp, p) + _evaluate(rp, p) for key, (mp, rp) in polys.items()}
    part = {key: _evaluate(mp, p) for key, (mp, _) in polys.items()}
    exact = standardized_moment(full, v1, v2, k, u1, u2)
    matching = standardized_moment(part, v1, v2, k, u1, u2)
    kappa_hat = exact_correlation(n, ell1, ell2, p)
    return MomentReport(
        k=k,
        u1=Fraction(u1),
        u2=Fraction(u2),
        exact=exact,
        matching=matching,
        dominant=float(matching),
        residual=float(exact) - float(matching),
        dominant_formula=dominant_moment(k, float(u1), float(u2), kappa_hat),
        kappa_hat=kappa_hat,
    )
