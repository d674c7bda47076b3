"""Reproduction suite: the ten acceptance checks, each timed against its limit.

Seeds for the statistical checks are fixed constants chosen before any run.
"""

from __future__ import annotations

import itertools
import math
import random
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Optional

from . import census as cen
from . import explorer, kernel, moments, simulate
from .progressions import ModelParams, Progression, count_aps, double_factorial, enumerate_aps, expected_count

SEEDS = {"poisson": 20260101, "gaussian": 20260102, "bivariate": 20260103}


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    detail: str
    seconds: float
    limit: Optional[float]

    @property
    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        limit = f" (limit {self.limit:.0f}s)" if self.limit else ""
        return f"[{status}] {self.number:2d} {self.title}: {self.detail} [{self.seconds:.1f}s{limit}]"


def _timed(number: int, title: str, limit: Optional[float], body: Callable[[], tuple]) -> CriterionResult:
    start = time.perf_counter()
    ok, detail = body()
    elapsed = time.perf_counter() - start
    if limit is not None and elapsed > limit:
        ok, detail = False, f"{detail}; exceeded the time limit"
    return CriterionResult(number, title, ok, detail, elapsed, limit)


def check_count_identity():
    bad = [(n, ell) for ell in range(3, 13) for n in range(ell, 501) if count_aps(n, ell) != len(enumerate_aps(n, ell))]
    return not bad, f"{len(bad)} mismatches over 3<=ell<=12, ell<=n<=500"


_GRID = [(a, b) for a in range(3, 9) for b in range(3, a + 1)]
_SWEEP: Dict[tuple, List[cen.PairCensus]] = {}


def _brute_sweep(ell, ell_prime, n_max=300):
    key = (ell, ell_prime, n_max)
    if key not in _SWEEP:
        _SWEEP[key] = list(cen.census_bruteforce_sweep(n_max, ell, ell_prime))
    return _SWEEP[key]


def check_census_oracle():
    checked = bad = 0
    for ell, ell_prime in _GRID:
        for brute in _brute_sweep(ell, ell_prime):
            if brute.n < ell:
                continue
            checked += 1
            if cen.census_fast(brute.n, ell, ell_prime) != brute:
                bad += 1
    return bad == 0, f"{checked} censuses compared, {bad} differ"


def check_positional_sums():
    ok = cen.positional_sum(5, 3, 3) == 32
    checked = bad = 0
    for ell, ell_prime in _GRID:
        for brute in _brute_sweep(ell, ell_prime):
            checked += 1
            s = cen.positional_sum(brute.n, ell, ell_prime)
            if not s == brute.positional_sum == cen.point_degree_sum(brute.n, ell, ell_prime):
                bad += 1
    return ok and bad == 0, f"S(5,3,3)={cen.positional_sum(5, 3, 3)}; {checked} grid points, {bad} disagree"


def check_subset_oracle():
    bad = checked = 0
    var5 = moments.variance(5, 3, Fraction(1, 2))
    for n in range(5, 21):
        for ell, ell_prime in [(a, b) for a in (3, 4, 5) for b in (3, 4, 5) if b <= a]:
            for p in (Fraction(1, 4), Fraction(1, 2), Fraction(3, 4)):
                dist = moments.exact_joint_distribution(n, ell, ell_prime, p)
                checked += 1
                if not (
                    dist.mean(0) == expected_count(n, ell, p)
                    and dist.mean(1) == expected_count(n, ell_prime, p)
                    and dist.covariance() == moments.exact_covariance(n, ell, ell_prime, p)
                    and dist.variance(0) == moments.variance(n, ell, p)
                    and dist.variance(1) == moments.variance(n, ell_prime, p)
                ):
                    bad += 1
    ok = bad == 0 and var5 == Fraction(7, 8)
    return ok, f"Var X_3(5,1/2)={var5}; {checked} (n,ell,ell',p) cases, {bad} mismatches"


def check_kernel_constants():
    ent = float(kernel.norm_sq(kernel.ENTROPY))
    ent_gap = abs(ent - (5 / 6 - math.pi**2 / 18))
    quad_gap = 0.0
    for a in range(3, 9):
        for b in range(3, a + 1):
            ka, kb = kernel.build_phi(a), kernel.build_phi(b)
            quad_gap = max(quad_gap, abs(float(kernel.inner_product(ka, kb)) - kernel.quad_inner_product(ka, kb)))
    target = float(kernel.lambda_constant(3, 3))
    gaps = [abs(cen.positional_sum(n, 3, 3) / n**3 - target) / target for n in (500, 1000, 2000, 4000)]
    decreasing = all(x > y for x, y in zip(gaps, gaps[1:]))
    ok = ent_gap <= 1e-8 and quad_gap <= 1e-12 and gaps[-1] <= 0.02 and decreasing
    side = ", ".join(
        f"{key}: exact {float(kernel.lambda_constant(*key)):.4f} tabulated {float(v):.4f}"
        for key, v in kernel.TABULATED_LAMBDA.items()
    )
    detail = (
        f"entropy gap {ent_gap:.1e}; quadrature gap {quad_gap:.1e}; "
        f"S/n^3 rel. gaps {', '.join(f'{g:.4f}' for g in gaps)}; side by side [{side}]"
    )
    return ok, detail


def check_poisson(threads: int = 4):
    n, ell = 10**5, 3
    p = (2 / count_aps(n, ell)) ** (1 / 3)
    batch = simulate.run_experiment(ModelParams(n, p, ell, ell), 10**4, SEEDS["poisson"], threads)
    rep = moments.chen_stein_bound(n, ell, p)
    tv = simulate.tv_distance(simulate.empirical_pmf(batch.counts[:, 0]), rep.poisson_param)
    bound = rep.delta1 + rep.delta2 + 3 * math.sqrt(1 / (4 * 10**4))
    return tv <= bound, f"p={p:.4e} lambda={rep.poisson_param:.4f} TV={tv:.4f} bound={bound:.4f}"


def check_gaussian(threads: int = 4):
    batch = simulate.run_experiment(ModelParams(10**4, 0.01, 3, 3), 2000, SEEDS["gaussian"], threads)
    ks = simulate.ks_distance(batch.standardized[:, 0])
    return ks <= 0.05, f"KS={ks:.4f} (gate 0.05), mean={batch.means[0]:.3f} sigma={batch.sigmas[0]:.3f}"


def check_bivariate(threads: int = 4):
    n, p, ell1, ell2 = 10**4, 0.05, 4, 3
    batch = simulate.run_experiment(ModelParams(n, p, ell1, ell2), 2000, SEEDS["bivariate"], threads)
    emp = simulate.empirical_correlation(batch)
    exact = moments.exact_correlation(n, ell1, ell2, p)
    psi = n * p ** (ell1 - 1) * ell1
    low, point, high = kernel.kappa_band(ell1, ell2, psi)
    ok = abs(emp - exact) <= 0.05 and low <= exact <= high
    return ok, (
        f"empirical={emp:.4f} exact={exact:.4f} psi={psi:.2f} "
        f"band=[{low:.4f}, {high:.4f}] point={point:.4f}"
    )


def check_moments():
    n, ell1, ell2, p = 12, 4, 3, Fraction(1, 2)
    bad = []
    oracle = moments.exact_joint_distribution(n, ell1, ell2, p)
    for k in (1, 2, 3, 4):
        for u in ((1, 0), (0, 1), (1, 1), (2, -1)):
            rep = explorer.exact_joint_moment(n, ell1, ell2, p, k, *u)
            if rep.exact != oracle.standardized_moment(k, *u):
                bad.append((k, u))
    k1 = explorer.exact_joint_moment(n, ell1, ell2, p, 1, 1, 1).exact
    k2 = explorer.exact_joint_moment(n, ell1, ell2, p, 2, 1, 0).exact
    ok = not bad and k1.is_rational and k1.rational == 0 and k2.is_rational and k2.rational == 1
    return ok, f"k=1 -> {float(k1)}, k=2,u=(1,0) -> {float(k2)}; oracle mismatches {bad}"


def _random_tuple(rng, pool, k):
    return [rng.choice(pool) for _ in range(k)]


def check_explorer():
    ell1, ell2 = 4, 3
    pool = enumerate_aps(10, ell1) + enumerate_aps(10, ell2)
    rng = random.Random(10)
    perm_bad = perm_checked = 0
    cases = [list(c) for k in (1, 2, 3) for c in itertools.combinations_with_replacement(pool, k)]
    cases += [_random_tuple(rng, pool, k) for k in (4, 5) for _ in range(300)]
    for tup in cases:
        ref = explorer.explore(tup, ell1, ell2)
        for perm in itertools.permutations(tup):
            perm_checked += 1
            if explorer.explore(list(perm), ell1, ell2) != ref:
                perm_bad += 1
    zero_pool = enumerate_aps(30, ell1) + enumerate_aps(30, ell2)
    zeros_checked = zeros_bad = 0
    while zeros_checked < 1000:
        tup = _random_tuple(rng, zero_pool, rng.randint(2, 6))
        flags = explorer.explore(tup, ell1, ell2).valid
        if flags.no_consecutive_zeros and flags.last_positive:
            continue
        zeros_checked += 1
        if explorer.centred_product_expectation(tup, Fraction(1, 3)) != 0:
            zeros_bad += 1
    match_ok = all(len(explorer.perfect_matchings(k)) == double_factorial(k - 1) for k in (2, 4, 6))
    realised_ok = all(_realised_matchings(k) == double_factorial(k - 1) for k in (2, 4, 6))
    ok = perm_bad == 0 and zeros_bad == 0 and match_ok and realised_ok
    return ok, (
        f"{perm_checked} permutations ({perm_bad} differ); {zeros_checked} zero-law tuples "
        f"({zeros_bad} non-zero); matchings {[len(explorer.perfect_matchings(k)) for k in (2, 4, 6)]}"
    )


def _realised_matchings(k: int) -> int:
    """Distinct intersection patterns over orderings of k/2 disjoint meeting pairs."""
    aps = []
    for j in range(k // 2):
        base = 1 + 10 * j
        aps += [Progression(base, 1, 3), Progression(base + 2, 1, 3)]
    patterns = set()
    for perm in itertools.permutations(range(k)):
        tup = [aps[i] for i in perm]
        if explorer.is_matching_tuple(tup):
            graph = explorer.intersection_graph(tup)
            patterns.add(tuple(tuple(sorted((i, nb[0]))) for i, nb in enumerate(graph) if i < nb[0]))
    return len(patterns)


CRITERIA = [
    (1, "exact count identity", 60, check_count_identity),
    (2, "census oracle equivalence", 600, check_census_oracle),
    (3, "positional-sum identities", None, check_positional_sums),
    (4, "subset-oracle equivalence", 300, check_subset_oracle),
    (5, "kernel constants", None, check_kernel_constants),
    (6, "Poisson regime TV bound", 300, check_poisson),
    (7, "univariate Gaussian KS", 300, check_gaussian),
    (8, "bivariate correlation", 600, check_bivariate),
    (9, "moment machinery", 600, check_moments),
    (10, "explorer invariants", None, check_explorer),
]


def run_criterion(number: int) -> CriterionResult:
    num, title, limit, body = CRITERIA[number - 1]
    return _timed(num, title, limit, body)


def run_all(numbers=None) -> List[CriterionResult]:
    numbers = numbers or [c[0] for c in CRITERIA]
    return [run_criterion(i) for i in numbers]


def summary_table(results: List[CriterionResult]) -> str:
    lines = [r.line for r in results]
    lines.append(f"{sum(r.passed for r in results)}/{len(results)} criteria passed")
    return "\n".join(lines) + "\n"
