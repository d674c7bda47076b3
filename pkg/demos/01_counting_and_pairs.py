# Counting APs in [n] and classifying ordered pairs by how much they overlap.
#
#     python demos/01_counting_and_pairs.py

from apfluct.census import census_bruteforce, census_fast, overlap_count, point_degree_sum, positional_sum
from apfluct.progressions import count_aps, count_aps_closed_form, enumerate_aps

# %% the four 3-APs of [5]
for ap in enumerate_aps(5, 3):
    print(ap.start, ap.diff, list(ap))

# %% exact counts grow like n^2 / (2 (ell - 1))
for n in (10**3, 10**4, 10**5):
    a = count_aps(n, 3)
    print(n, a, a * 4 / n**2, count_aps_closed_form(n, 3) == a)

# %% pair profile: counts[r] is the number of ordered pairs sharing r points
c = census_bruteforce(9, 4, 3)
print("profile", c.counts, "total", c.total, "=", count_aps(9, 4) * count_aps(9, 3))
print("overlap pairs", c.overlap, overlap_count(9, 4, 3))

# the fast census never forms pairs, so it scales
print(census_fast(10**5, 8, 7).counts)

# %% three ways to get the shared-point sum
for n in (50, 200):
    print(n, positional_sum(n, 4, 3), census_fast(n, 4, 3).positional_sum, point_degree_sum(n, 4, 3))

# %% loose pairs vs shared-point sum, scaled by n^3
for n in (500, 1000, 2000, 4000):
    c = census_fast(n, 3, 3)
    print(n, c.loose / n**3, c.positional_sum / n**3)
