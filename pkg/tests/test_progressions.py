from collections import Counter
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from apfluct.progressions import (
    DomainError,
    ModelParams,
    Progression,
    count_aps,
    count_aps_closed_form,
    double_factorial,
    enumerate_aps,
    expected_count,
    parse_probability,
)
from oracles import naive_aps


def test_enumerate_small():
    aps = enumerate_aps(5, 3)
    assert [(a.start, a.diff) for a in aps] == [(1, 1), (2, 1), (3, 1), (1, 2)]
    assert enumerate_aps(7, 7) == [Progression(1, 1, 7)]
    assert len(enumerate_aps(9, 3)) == 16


def test_count_frozen():
    assert count_aps(5, 3) == 4
    assert count_aps(9, 3) == 16
    assert count_aps(9, 4) == 9
    assert count_aps(11, 11) == 1


@pytest.mark.parametrize("n,ell", [(2, 3), (5, 2), (5, 6)])
def test_domain_errors(n, ell):
    with pytest.raises(DomainError):
        enumerate_aps(n, ell)
    with pytest.raises(DomainError):
        count_aps(n, ell)


def test_overflow_reported():
    with pytest.raises(OverflowError):
        count_aps(1 << 70, 3)


def test_expected_count():
    assert expected_count(5, 3, 1) == 4
    assert expected_count(5, 3, 0) == 0
    assert expected_count(5, 3, Fraction(1, 2)) == Fraction(1, 2)


def test_count_asymptotic_constant():
    n = 10**5
    assert abs(count_aps(n, 3) * 4 / n**2 - 1) < 0.01


@given(st.integers(3, 12).flatmap(lambda ell: st.tuples(st.integers(ell, 90), st.just(ell))))
def test_count_matches_enumeration_and_closed_form(case):
    n, ell = case
    aps = enumerate_aps(n, ell)
    assert count_aps(n, ell) == len(aps) == count_aps_closed_form(n, ell)
    assert Counter(frozenset(a.elements()) for a in aps) == Counter(naive_aps(n, ell))
    assert [a.sort_key() for a in aps] == sorted(a.sort_key() for a in aps)


@given(st.integers(3, 10), st.integers(10, 200))
def test_count_monotone(ell, n):
    assert count_aps(n + 1, ell) >= count_aps(n, ell)
    if ell < n:
        assert count_aps(n, ell + 1) <= count_aps(n, ell)


@given(st.integers(1, 50), st.integers(1, 20), st.integers(3, 9))
def test_progression_invariants(start, diff, length):
    ap = Progression(start, diff, length)
    els = list(ap.elements())
    assert els == [ap.element(i) for i in range(1, length + 1)]
    assert all(x < y for x, y in zip(els, els[1:]))
    assert ap.fits(ap.last) and not ap.fits(ap.last - 1)
    assert all(m in ap for m in els) and (ap.last + 1) not in ap
    assert bin(ap.mask()).count("1") == length


def test_progression_rejects_bad_fields():
    for args in [(0, 1, 3), (1, 0, 3), (1, 1, 2)]:
        with pytest.raises(DomainError):
            Progression(*args)


def test_model_params_validation():
    ModelParams(10, Fraction(1, 2), 4, 3)
    with pytest.raises(DomainError):
        ModelParams(10, 0.5, 3, 4)
    with pytest.raises(DomainError):
        ModelParams(10, 1.5, 4, 3)


def test_parse_probability():
    assert parse_probability("1/4") == Fraction(1, 4)
    assert parse_probability("0.25") == 0.25
    for bad in ("1/0", "x", "3/2"):
        with pytest.raises(DomainError):
            parse_probability(bad)


def test_double_factorial():
    assert [double_factorial(k) for k in (-1, 0, 1, 3, 5, 6)] == [1, 1, 1, 3, 15, 48]
