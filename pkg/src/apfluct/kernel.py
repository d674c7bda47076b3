"""Covariance kernels on [0, 1], their inner products, and the correlation constant.

``phi_ell(x) = (1/(ell-1)) * sum_i min{x/(1-a_i), (1-x)/a_i}`` with atoms
``a_i = (i-1)/(ell-1)``.  Each atom term is linear on either side of
``x = 1 - a_i``, so ``phi_ell`` is piecewise linear on the grid ``j/(ell-1)``
and is stored with exact rational coefficients.  The limit kernel is the
binary entropy ``phi_inf(x) = x log(1/x) + (1-x) log(1/(1-x))``.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence, Tuple, Union

from scipy import integrate

from .census import census_fast
from .progressions import DomainError, ModelParams, count_aps, expected_count

Number = Union[Fraction, float]
INF = math.inf

QUAD_TOL = 1e-10

# values tabulated in the literature for lim L/n^3, kept for side-by-side reports
TABULATED_LAMBDA = {
    (3, 3): Fraction(31, 48),
    (4, 4): Fraction(130, 243),
    (5, 5): Fraction(835, 1728),
    (4, 3): Fraction(785, 1296),
    (5, 3): Fraction(335, 576),
    (5, 4): Fraction(1339, 2592),
}


@dataclass(frozen=True)
class Kernel:
    """Either a finite piecewise-linear kernel (``ell`` an int) or the entropy kernel.

    For finite kernels ``segments[j] = (slope, intercept)`` holds on
    ``[breakpoints[j], breakpoints[j + 1]]``.
    """

    ell: Union[int, float]
    breakpoints: Tuple[Fraction, ...] = ()
    segments: Tuple[Tuple[Fraction, Fraction], ...] = ()

    @property
    def is_entropy(self) -> bool:
        return self.ell == INF

    def __call__(self, x):
        if not 0 <= x <= 1:
            raise DomainError(f"kernel argument must lie in [0, 1], got {x}")
        if self.is_entropy:
            return eval_entropy(float(x))
        j = _segment_index(self.breakpoints, x)
        slope, intercept = self.segments[j]
        return slope * x + intercept

    def samples(self, grid: int):
        """``[(x, phi(x))]`` on ``grid`` equally spaced points of [0, 1]."""
        if grid < 2:
            raise DomainError("grid needs at least two points")
        xs = [Fraction(i, grid - 1) for i in range(grid)]
        return [(x, self(x)) for x in xs]


def _segment_index(breakpoints, x) -> int:
    for j in range(len(breakpoints) - 1):
        if x <= breakpoints[j + 1]:
            return j
    return len(breakpoints) - 2


def _atom_piece(a: Fraction, mid: Fraction) -> Tuple[Fraction, Fraction]:
    """(slope, intercept) of min{x/(1-a), (1-x)/a} on a cell with midpoint ``mid``.

    1/0 = +inf is realised by branch choice: a = 0 always takes x/(1-a),
    a = 1 always takes (1-x)/a.
    """
    if a == 0 or (a != 1 and mid <= 1 - a):
        return 1 / (1 - a), Fraction(0)
    return -1 / a, 1 / a


@lru_cache(maxsize=None)
def build_phi(ell: int) -> Kernel:
    """The finite kernel phi_ell with rational breakpoints j/(ell-1)."""
    if ell == INF:
        return ENTROPY
    if not isinstance(ell, int) or ell < 3:
        raise DomainError(f"kernel length must be an integer >= 3, got {ell}")
    m = ell - 1
    grid = tuple(Fraction(j, m) for j in range(ell))
    atoms = [Fraction(i, m) for i in range(ell)]
    segments = []
    for lo, hi in zip(grid, grid[1:]):
        mid = (lo + hi) / 2
        slope = intercept = Fraction(0)
        for a in atoms:
            s, c = _atom_piece(a, mid)
            slope += s
            intercept += c
        segments.append((slope / m, intercept / m))
    return Kernel(ell, grid, tuple(segments))


ENTROPY = Kernel(INF)


def eval_entropy(x: float) -> float:
    if x <= 0 or x >= 1:
        return 0.0
    return -x * math.log(x) - (1 - x) * math.log1p(-x)


def harmonic(t: int) -> Fraction:
    return sum((Fraction(1, j) for j in range(1, t + 1)), Fraction(0))


def _linear_times_ulogu(alpha: float, beta: float, lo: float, hi: float) -> float:
    """integral_lo^hi (alpha u + beta) * (-u log u) du, exact antiderivative."""

    def anti(u):
        if u == 0:
            return 0.0
        lu = math.log(u)
        return -alpha * (u**3 * lu / 3 - u**3 / 9) - beta * (u**2 * lu / 2 - u**2 / 4)

    return anti(hi) - anti(lo)


def _finite_entropy_product(k: Kernel) -> float:
    total = 0.0
    for (lo, hi), (slope, intercept) in zip(zip(k.breakpoints, k.breakpoints[1:]), k.segments):
        a, b = float(slope), float(intercept)
        lo_f, hi_f = float(lo), float(hi)
        total += _linear_times_ulogu(a, b, lo_f, hi_f)
        # (1-t) log(1-t) half: substitute u = 1 - t
        total += _linear_times_ulogu(-a, a + b, 1 - hi_f, 1 - lo_f)
    return total


def _finite_product(k1: Kernel, k2: Kernel) -> Fraction:
    grid = sorted(set(k1.breakpoints) | set(k2.breakpoints))
    total = Fraction(0)
    for lo, hi in zip(grid, grid[1:]):
        mid = (lo + hi) / 2
        m1, c1 = k1.segments[_segment_index(k1.breakpoints, mid)]
        m2, c2 = k2.segments[_segment_index(k2.breakpoints, mid)]
        # antiderivative of (m1 x + c1)(m2 x + c2)
        def anti(x):
            return m1 * m2 * x**3 / 3 + (m1 * c2 + m2 * c1) * x**2 / 2 + c1 * c2 * x

        total += anti(hi) - anti(lo)
    return total


def quad_inner_product(k1: Kernel, k2: Kernel, tol: float = QUAD_TOL) -> float:
    """Adaptive numeric quadrature of k1*k2 split at all breakpoints."""
    points = sorted({float(b) for b in k1.breakpoints + k2.breakpoints} | {0.0, 1.0})
    total = 0.0
    for lo, hi in zip(points, points[1:]):
        value, _ = integrate.quad(
            lambda x: float(k1(x)) * float(k2(x)), lo, hi, epsabs=tol, epsrel=tol, limit=200
        )
        total += value
    return total


def inner_product(k1: Kernel, k2: Kernel) -> Number:
    """L^2[0,1] inner product: exact Fraction for two finite kernels, else float."""
    if not k1.is_entropy and not k2.is_entropy:
        return _finite_product(k1, k2)
    if k1.is_entropy and k2.is_entropy:
        return _entropy_norm_sq()
    return _finite_entropy_product(k2 if k1.is_entropy else k1)


@lru_cache(maxsize=1)
def _entropy_norm_sq() -> float:
    # x log x squared has no elementary antiderivative; adaptive quadrature
    value, _ = integrate.quad(
        lambda x: eval_entropy(x) ** 2, 0.0, 1.0, epsabs=1e-13, epsrel=1e-13, limit=200
    )
    return value


def norm_sq(k: Kernel) -> Number:
    return inner_product(k, k)


def l2_distance(k1: Kernel, k2: Kernel) -> float:
    d2 = float(norm_sq(k1)) - 2 * float(inner_product(k1, k2)) + float(norm_sq(k2))
    return math.sqrt(max(d2, 0.0))


def lambda_constant(ell, ell_prime) -> Number:
    """lim n^-3 of the loose-pair count: <phi_ell, phi_ell'> (math.inf selects phi_inf)."""
    return inner_product(build_phi(ell), build_phi(ell_prime))


def tabulated_lambda(ell, ell_prime) -> Optional[Fraction]:
    """Tabulated literature value for the same limit, when one exists."""
    return TABULATED_LAMBDA.get((ell, ell_prime))


def gamma(ell, c: float) -> float:
    """Overlap-to-loose variance ratio for the longer length in the intermediate regime."""
    if c <= 0:
        raise DomainError(f"intermediate regime needs c > 0, got {c}")
    if ell == INF:
        return 1.0 / (2 * c * float(norm_sq(ENTROPY)))
    return ell / (2 * (ell - 1) * c * float(norm_sq(build_phi(ell))))


def kappa(ell1, ell2, regime: str, c: Optional[float] = None) -> float:
    """Limiting correlation of the standardized pair.

    ``ell1``/``ell2`` may be ``math.inf`` for a diverging length, which selects
    the entropy kernel.  ``regime`` is one of ``overlap``, ``intermediate``
    (requires ``c``), ``loose``.
    """
    if regime == "overlap":
        return 0.0
    k1, k2 = build_phi(ell1), build_phi(ell2)
    cos2 = float(inner_product(k1, k2)) ** 2 / (float(norm_sq(k1)) * float(norm_sq(k2)))
    if regime == "loose":
        factor = 1.0
    elif regime == "intermediate":
        if c is None:
            raise DomainError("intermediate regime needs the limit c")
        factor = 1.0 / (1.0 + gamma(ell1, c))
    else:
        raise DomainError(f"unknown regime {regime!r}")
    return min(1.0, math.sqrt(cos2 * factor))


@dataclass(frozen=True)
class RegimeCutoffs:
    """Finite-n stand-ins for the limits 0 / c / infinity."""

    overlap_below: float = 0.1
    loose_above: float = 10.0
    poisson_low: float = 0.01
    poisson_high: float = 100.0
    zero_below: float = 0.01


@dataclass(frozen=True)
class RegimeReport:
    psi: float
    moment_threshold: float
    regime_univariate: str
    poisson_c: Optional[float]
    regime_pair: str
    pair_c: Optional[float]
    kappa: float
    gamma: float
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return asdict(self)


def univariate_regime(n: int, ell: int, p, cutoffs: RegimeCutoffs = RegimeCutoffs()):
    """(label, c) with label in zero | poisson | gaussian for X_ell."""
    threshold = n**2 * float(p) ** ell / (ell - 1)
    if float(expected_count(n, ell, p)) < cutoffs.zero_below:
        return "zero", None
    if cutoffs.poisson_low <= threshold <= cutoffs.poisson_high:
        return "poisson", threshold
    return "gaussian", None


def classify_regimes(params: ModelParams, cutoffs: RegimeCutoffs = RegimeCutoffs()) -> RegimeReport:
    n, p, ell1, ell2 = params.n, float(params.p), params.ell1, params.ell2
    psi = n * p ** (ell1 - 1) * ell1
    threshold = n**2 * p**ell1 / (ell1 - 1)
    label, c_uni = univariate_regime(n, ell1, params.p, cutoffs)
    label2, c_uni2 = univariate_regime(n, ell2, params.p, cutoffs)
    if psi < cutoffs.overlap_below:
        pair, c = "overlap", None
        g = INF
    elif psi > cutoffs.loose_above:
        pair, c = "loose", None
        g = 0.0
    else:
        pair, c = "intermediate", psi
        g = gamma(ell1, psi)
    k = kappa(ell1, ell2, pair, c) if ell1 != ell2 else 1.0
    return RegimeReport(
        psi=psi,
        moment_threshold=threshold,
        regime_univariate=label,
        poisson_c=c_uni,
        regime_pair=pair,
        pair_c=c,
        kappa=k,
        gamma=g,
        extra={
            "poisson_mean": None if c_uni is None else c_uni / 2,
            "regime_univariate_ell2": label2,
            "poisson_c_ell2": c_uni2,
            "aps_ell1": count_aps(n, ell1),
            "aps_ell2": count_aps(n, ell2),
        },
    )


def kappa_band(ell1: int, ell2: int, psi: float, cutoffs: RegimeCutoffs = RegimeCutoffs()):
    """(low, point, high) prediction for the correlation at threshold value ``psi``.

    The point value is the limit formula of the regime ``psi`` falls in, with
    c = psi in the intermediate regime.  At finite n the limit c is only known
    up to constant factors, so the band spans the intermediate formula over
    c in [psi/2, 2 psi], widened to include the point value.
    """
    if psi <= 0:
        return 0.0, 0.0, 0.0
    low = kappa(ell1, ell2, "intermediate", psi / 2)
    high = kappa(ell1, ell2, "intermediate", 2 * psi)
    if psi < cutoffs.overlap_below:
        point = 0.0
    elif psi > cutoffs.loose_above:
        point = kappa(ell1, ell2, "loose")
    else:
        point = kappa(ell1, ell2, "intermediate", psi)
    return min(low, point), point, max(high, point)


def lambda_report(ell, ell_prime, ns: Sequence[int] = (500, 1000, 2000, 4000)) -> dict:
    """Symbolic constant, tabulated value and the census trend, side by side.

    The trend lists both S/n^3 (pairs weighted by shared points) and L/n^3
    (pairs sharing exactly one point); the census is the arbiter.
    """
    exact = lambda_constant(ell, ell_prime)
    trend = {}
    if ell != INF and ell_prime != INF:
        big, small = max(ell, ell_prime), min(ell, ell_prime)
        for n in ns:
            c = census_fast(n, big, small)
            trend[n] = {"positional": c.positional_sum / n**3, "loose": c.loose / n**3}
    tab = tabulated_lambda(ell, ell_prime) or tabulated_lambda(ell_prime, ell)
    return {
        "ell": ell,
        "ell_prime": ell_prime,
        "exact": exact,
        "value": float(exact),
        "tabulated": tab,
        "tabulated_value": None if tab is None else float(tab),
        "trend": trend,
    }
