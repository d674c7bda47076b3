import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from apfluct.census import census_fast
from apfluct.explorer import exact_joint_moment
from apfluct.moments import (
    chen_stein_bound,
    chen_stein_quantities,
    exact_correlation,
    exact_covariance,
    exact_joint_distribution,
    mikhailov_diagnostic,
    standardized_moment,
    variance,
)
from apfluct.progressions import DomainError, ResourceError, expected_count
from oracles import subset_law


def test_variance_frozen():
    assert variance(5, 3, Fraction(1, 2)) == Fraction(7, 8)
    assert exact_covariance(5, 3, 3, 0) == 0 and exact_covariance(5, 3, 3, 1) == 0
    # from oracles.subset_law(10, 4, 3, 1/3)
    assert exact_covariance(10, 4, 3, Fraction(1, 3)) == Fraction(1360, 2187)
    assert exact_covariance(10, 3, 4, Fraction(1, 3)) == Fraction(1360, 2187)


def test_oracle_small():
    d = exact_joint_distribution(3, 3, 3, Fraction(1, 3))
    assert d.marginal(0) == {0: Fraction(26, 27), 1: Fraction(1, 27)}
    d5 = exact_joint_distribution(5, 3, 3, Fraction(1, 2))
    assert d5.mean(0) == Fraction(1, 2) == expected_count(5, 3, Fraction(1, 2))
    assert sum(d5.probs) == 1 and all(x >= 0 for x in d5.probs)
    with pytest.raises(ResourceError):
        exact_joint_distribution(25, 3, 3, Fraction(1, 2))


@given(st.integers(5, 11), st.sampled_from([(3, 3), (4, 3), (5, 4), (5, 3)]), st.sampled_from([Fraction(1, 4), Fraction(1, 2), Fraction(2, 3)]))
@settings(max_examples=25, deadline=None)
def test_oracle_matches_naive_law(n, lengths, p):
    ell, ell2 = lengths
    d = exact_joint_distribution(n, ell, ell2, p)
    law = subset_law(n, ell, ell2, p) if n <= 9 else None
    if law is not None:
        assert dict(zip(d.support, d.probs)) == {k: v for k, v in law.items() if v}
    assert d.covariance() == exact_covariance(n, ell, ell2, p)
    assert d.variance(1) == variance(n, ell2, p)
    marg = d.marginal(1)
    alone = exact_joint_distribution(n, ell2, ell2, p).marginal(0)
    assert marg == alone


def test_float_mode_matches_exact():
    exact = exact_covariance(40, 4, 3, Fraction(1, 5))
    assert exact_covariance(40, 4, 3, 0.2) == pytest.approx(float(exact), rel=1e-12)


def test_correlation_degenerate():
    assert math.isnan(exact_correlation(10, 4, 3, 1))


def test_chen_stein_examples():
    d1, d2, lam = chen_stein_quantities(5, 3, Fraction(1, 2))
    assert (d1, d2, lam) == (Fraction(1, 4), Fraction(5, 8), Fraction(1, 2))
    assert chen_stein_quantities(20, 3, 0)[:2] == (0, 0)
    rep = chen_stein_bound(5, 3, Fraction(1, 2))
    assert rep.delta1 == 0.25 and rep.delta2 == 0.625 and rep.poisson_param == 0.5
    assert rep.tv_bound == 0.875


def test_mikhailov():
    ratios = []
    for n in (10**3, 10**4, 10**5):
        p = n ** -0.55
        m, q, sd, ratio, degenerate = mikhailov_diagnostic(n, 3, p, 3)
        assert not degenerate
        assert ratio == pytest.approx(m * q**2 / sd**3)
        ratios.append(ratio)
    assert ratios[0] > ratios[1] > ratios[2]
    m, q, sd, ratio, degenerate = mikhailov_diagnostic(20, 3, 1, 3)
    assert degenerate and ratio == math.inf
    with pytest.raises(DomainError):
        mikhailov_diagnostic(20, 3, 0.5, 2)


def test_standardized_moment_representation():
    central = {(2, 0): Fraction(4), (1, 1): Fraction(3), (0, 2): Fraction(9)}
    m = standardized_moment(central, 4, 9, 2, 1, 1)
    assert m.as_dict()[(0, 0)] == 2 and m.as_dict()[(1, 1)] == 6
    assert float(m) == pytest.approx(2 + 6 / 6)
    with pytest.raises(DomainError):
        standardized_moment(central, 0, 9, 2, 1, 1)


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_joint_moment_matches_oracle_n10(k):
    p = Fraction(1, 2)
    oracle = exact_joint_distribution(10, 4, 3, p)
    for u in ((1, 0), (1, 1), (3, -2)):
        assert exact_joint_moment(10, 4, 3, p, k, *u).exact == oracle.standardized_moment(k, *u)
