# Exact joint moments from k-tuples of APs, checked against full subset enumeration.
#
#     python demos/04_moments.py

from fractions import Fraction

from apfluct.explorer import centred_product_expectation, exact_joint_moment, explore
from apfluct.moments import exact_joint_distribution
from apfluct.progressions import Progression

# %% exploring a tuple: overlaps t and sizes s in the canonical order
tup = [Progression(7, 1, 3), Progression(1, 2, 4), Progression(3, 1, 3), Progression(20, 1, 3)]
r = explore(tup, 4, 3)
print(r.t, r.s, r.component_starts, r.valid)
# the last AP is isolated, so its centred factor kills the expectation
print(centred_product_expectation(tup, Fraction(1, 2)))
print(centred_product_expectation(tup[:3], Fraction(1, 2)))

# %% moments of (X_4/sigma_4 + X_3/sigma_3), tuple sum vs all 2^12 subsets
n, p = 12, Fraction(1, 2)
oracle = exact_joint_distribution(n, 4, 3, p)
for k in (1, 2, 3, 4):
    rep = exact_joint_moment(n, 4, 3, p, k, 1, 1)
    print(k, float(rep.exact), rep.exact == oracle.standardized_moment(k, 1, 1))
    # perfect-matching tuples vs the closed form at the finite-n correlation
    print("   matching part", rep.dominant, "formula", rep.dominant_formula, "rest", rep.residual)
