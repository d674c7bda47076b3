# Kernels on [0, 1] and what they predict for the correlation of X_4 and X_3.
#
#     python demos/02_kernels_and_kappa.py

import math
from fractions import Fraction

from apfluct.kernel import ENTROPY, build_phi, kappa, kappa_band, l2_distance, lambda_report, norm_sq
from apfluct.moments import exact_correlation

# %% phi_3 is 1/2 + min(x, 1-x); evaluation is exact at rational points
phi3 = build_phi(3)
print([str(phi3(Fraction(i, 8))) for i in range(9)])
print(build_phi(5).segments)

# %% the entropy kernel is the L^2 limit
for ell in (10, 20, 40, 80, 160):
    print(ell, l2_distance(build_phi(ell), ENTROPY))
print(norm_sq(ENTROPY), 5 / 6 - math.pi**2 / 18)

# %% symbolic constant, tabulated value, and what the census says
for key in [(3, 3), (4, 3), (5, 5)]:
    rep = lambda_report(*key)
    print(key, rep["exact"], rep["value"], rep["tabulated_value"])
    for n, t in rep["trend"].items():
        print("   ", n, t["positional"], t["loose"])

# %% correlation across the pair regimes
print("loose", kappa(4, 3, "loose"))
for c in (0.1, 1, 5, 10, 100):
    print("c =", c, kappa(4, 3, "intermediate", c))

# %% finite n: psi = n p^3 4 = 5 puts (4, 3) in the intermediate regime
n, p = 10**4, 0.05
print("exact", exact_correlation(n, 4, 3, p), "band", kappa_band(4, 3, n * p**3 * 4))
