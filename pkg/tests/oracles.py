"""Slow, obviously-correct reference implementations used only by the tests."""

import itertools
from fractions import Fraction


def naive_aps(n, ell):
    """All ell-APs in [n] as frozensets, by scanning every (start, diff)."""
    out = []
    for diff in range(1, n):
        for start in range(1, n + 1):
            last = start + (ell - 1) * diff
            if last <= n:
                out.append(frozenset(range(start, last + 1, diff)))
    return out


def naive_census(n, ell, ell_prime):
    counts = [0] * (ell_prime + 1)
    second = naive_aps(n, ell_prime)
    for a in naive_aps(n, ell):
        for b in second:
            counts[len(a & b)] += 1
    return tuple(counts)


def naive_point_degree(n, ell, m):
    return sum(1 for ap in naive_aps(n, ell) if m in ap)


def naive_positional_sum(n, ell, ell_prime):
    total = 0
    for i in range(1, ell + 1):
        for j in range(1, ell_prime + 1):
            for d in range(1, n):
                for e in range(1, n):
                    total += max(n - max((i - 1) * d, (j - 1) * e) - max((ell - i) * d, (ell_prime - j) * e), 0)
    return total


def subset_law(n, ell1, ell2, p):
    """{(x1, x2): prob} by looping over every subset of [n] with Fractions."""
    p = Fraction(p)
    a1, a2 = naive_aps(n, ell1), naive_aps(n, ell2)
    law = {}
    for bits in range(1 << n):
        s = {m + 1 for m in range(n) if bits >> m & 1}
        key = (sum(ap <= s for ap in a1), sum(ap <= s for ap in a2))
        w = p ** len(s) * (1 - p) ** (n - len(s))
        law[key] = law.get(key, 0) + w
    return law


def direct_centred_product(sets, p):
    """E prod(1{T in S} - p^|T|) by summing over subsets of the union."""
    p = Fraction(p)
    union = sorted(set().union(*sets))
    total = Fraction(0)
    for keep in itertools.product((0, 1), repeat=len(union)):
        s = {x for x, k in zip(union, keep) if k}
        w = p ** len(s) * (1 - p) ** (len(union) - len(s))
        prod = Fraction(1)
        for t in sets:
            prod *= (1 if t <= s else 0) - p ** len(t)
        total += w * prod
    return total


def naive_count_in_set(elements, ell):
    s = set(elements)
    top = max(s) if s else 0
    return sum(
        1
        for a in s
        for d in range(1, top + 1)
        if all(a + k * d in s for k in range(ell))
    )
