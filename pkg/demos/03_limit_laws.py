# Monte Carlo against the Poisson, normal and bivariate predictions.
#
#     python demos/03_limit_laws.py

import math

import numpy as np

from apfluct.moments import chen_stein_bound, exact_correlation
from apfluct.progressions import ModelParams, count_aps
from apfluct.simulate import empirical_correlation, empirical_pmf, ks_distance, run_experiment, tv_distance

THREADS = 4

# %% sparse: about two 3-APs expected in [10^5]_p
n = 10**5
p = (2 / count_aps(n, 3)) ** (1 / 3)
batch = run_experiment(ModelParams(n, p, 3, 3), 10**4, 1, THREADS)
rep = chen_stein_bound(n, 3, p)
print("lambda", rep.poisson_param, "delta1", rep.delta1, "delta2", rep.delta2)
print("TV to Poisson", tv_distance(empirical_pmf(batch.counts[:, 0]), rep.poisson_param))
print("pmf", {k: round(v, 4) for k, v in empirical_pmf(batch.counts[:, 0]).items()})

# %% denser: X_3 standardized with the exact mean and sigma
batch = run_experiment(ModelParams(10**4, 0.01, 3, 3), 2000, 2, THREADS)
print("mean", batch.means[0], "sigma", batch.sigmas[0])
print("KS", ks_distance(batch.standardized[:, 0]))
# the count lives on a lattice of spacing 1/sigma, which alone costs about
# half an atom in the sup distance
print("lattice half-jump", 0.5 / (batch.sigmas[0] * math.sqrt(2 * math.pi)))

# %% skewness of the standardized count shrinks only slowly
z = batch.standardized[:, 0]
print("sample skewness", float(np.mean(z**3)))

# %% two lengths at once
batch = run_experiment(ModelParams(10**4, 0.05, 4, 3), 2000, 3, THREADS)
print("empirical", empirical_correlation(batch), "exact", exact_correlation(10**4, 4, 3, 0.05))
