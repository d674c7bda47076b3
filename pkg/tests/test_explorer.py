import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from apfluct.explorer import (
    centred_product_expectation,
    dominant_moment,
    exact_joint_moment,
    explore,
    intersection_graph,
    is_matching_tuple,
    mixed_central_moments,
    perfect_matchings,
    validate_type_vectors,
)
from apfluct.progressions import DomainError, Progression, ResourceError, double_factorial, enumerate_aps
from oracles import direct_centred_product

P = Progression
POOL = enumerate_aps(14, 4) + enumerate_aps(14, 3)
tuples = st.lists(st.sampled_from(POOL), min_size=1, max_size=5)


def test_explore_examples():
    r = explore([P(3, 1, 3), P(1, 1, 3)], 3, 3)
    assert r.t == (0, 1) and r.s == (3, 3) and r.valid.all_valid
    assert r.ordered == (P(1, 1, 3), P(3, 1, 3))
    same = explore([P(2, 3, 3), P(2, 3, 3)], 3, 3)
    assert same.t == (0, 3) and same.s == (3, 3)
    apart = explore([P(1, 1, 3), P(7, 1, 3)], 3, 3)
    assert apart.t == (0, 0) and not apart.valid.contributing
    with pytest.raises(DomainError):
        explore([P(1, 1, 5)], 4, 3)


def test_longer_first():
    r = explore([P(1, 1, 3), P(3, 2, 4)], 4, 3)
    assert r.s == (4, 3) and r.t == (0, 1)


def test_validate_examples():
    assert validate_type_vectors((0, 1), (3, 3), 3, 3).all_valid
    assert not validate_type_vectors((0, 0, 1), (3, 3, 3), 3, 3).no_consecutive_zeros
    assert not validate_type_vectors((0, 1, 0), (3, 3, 3), 3, 3).last_positive
    assert not validate_type_vectors((0, 4), (3, 3), 3, 3).bounds
    assert not validate_type_vectors((0, 1), (3, 5), 3, 4).sizes
    # a zero on a short AP must be followed by short APs only
    assert not validate_type_vectors((0, 1, 0, 1), (4, 4, 3, 4), 4, 3).zero_rule
    flags = validate_type_vectors((0, 1, 0, 2), (4, 4, 4, 3), 4, 3)
    assert flags.matching and flags.zero_count
    assert validate_type_vectors((0, 1, 1, 0, 1, 0, 1, 1), (3,) * 8, 3, 3).zero_count
    assert not validate_type_vectors((0, 1, 0), (3, 3, 3), 3, 3).zero_count


@given(tuples)
@settings(max_examples=150, deadline=None)
def test_explore_invariants(tup):
    r = explore(tup, 4, 3)
    assert sorted(r.ordered, key=lambda a: (a.diff, a.start, a.length)) == sorted(tup, key=lambda a: (a.diff, a.start, a.length))
    seen = set()
    for ap, t, s in zip(r.ordered, r.t, r.s):
        assert t == len(seen & set(ap.elements())) and s == ap.length
        seen |= set(ap.elements())
    assert r.component_starts == tuple(j for j, t in enumerate(r.t) if t == 0)
    assert r.valid.sizes and r.valid.bounds and r.valid.zero_rule
    for perm in itertools.islice(itertools.permutations(tup), 30):
        assert explore(list(perm), 4, 3) == r


@given(tuples)
@settings(max_examples=120, deadline=None)
def test_centred_product_matches_direct_expectation(tup):
    p = Fraction(2, 5)
    value = centred_product_expectation(tup, p)
    assert value == direct_centred_product([set(a.elements()) for a in tup], p)
    flags = explore(tup, 4, 3).valid
    if not (flags.no_consecutive_zeros and flags.last_positive):
        assert value == 0


def test_pair_closed_form():
    p = Fraction(1, 3)
    base = P(1, 1, 4)
    for other in enumerate_aps(9, 3):
        r = len(set(base.elements()) & set(other.elements()))
        expected = p ** (7 - r) - p**7 if r else 0
        assert centred_product_expectation([base, other], p) == expected
    assert centred_product_expectation([base], p) == 0


def test_tuple_bound():
    with pytest.raises(ResourceError):
        centred_product_expectation([P(1, 1, 3)] * 13, Fraction(1, 2))


def test_perfect_matchings():
    for k in (2, 4, 6, 8):
        ms = perfect_matchings(k)
        assert len(ms) == len(set(ms)) == double_factorial(k - 1)
        for m in ms:
            assert sorted(x for pair in m for x in pair) == list(range(k))
    assert perfect_matchings(5) == []


def test_matching_tuples():
    a, b, c, d = P(1, 1, 3), P(3, 1, 3), P(10, 1, 3), P(12, 1, 3)
    assert is_matching_tuple([a, c, b, d])
    assert not is_matching_tuple([a, b, c])
    assert intersection_graph([a, a]) == [[1], [0]]


def test_dominant_moment():
    assert dominant_moment(2, 1, 0, 0.3) == 1
    assert dominant_moment(4, 1, 1, 0) == 12
    assert dominant_moment(2, 1, 1, 0.5) == 3
    assert dominant_moment(3, 1, 1, 0.5) == 0


def test_joint_moment_basics():
    p = Fraction(1, 2)
    assert float(exact_joint_moment(9, 4, 3, p, 1, 1, 1).exact) == 0
    assert exact_joint_moment(9, 4, 3, p, 2, 1, 0).exact.rational == 1
    rep3 = exact_joint_moment(9, 4, 3, p, 3, 1, 1)
    assert rep3.dominant == 0
    rep2 = exact_joint_moment(9, 4, 3, p, 2, 1, 1)
    assert rep2.residual == pytest.approx(0, abs=1e-12)
    assert rep2.dominant == pytest.approx(2 + 2 * rep2.kappa_hat)


def test_moment_budget():
    with pytest.raises(ResourceError):
        mixed_central_moments(12, 4, 3, 4, budget=1000)
