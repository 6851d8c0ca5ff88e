"""Cycle lengths of 0 under x -> x^3 + c.

For p = 2 mod 3 the cube map is a bijection, so 0 always returns.  The
return time l(c, p), scaled by p, looks uniform on (0, 1].
"""
from quaditer import CubicMap, FieldContext, permutation_cycle_length
from quaditer.experiments import REFERENCE_BINS, table1

# %% the tiny case
F = FieldContext(5)
print([permutation_cycle_length(CubicMap(F, c)) for c in range(1, 5)])

# Two binning conventions: l itself, or the l - 1 steps from c back to 0.
print(table1(5, offset=0).bins)
print(table1(5).bins)

# %% a mid-sized prime in a second or so
rep = table1(10007)
print(rep.bins, f"chi2 = {rep.chi2:.2f}, p-value = {rep.chi2_pvalue:.3f}")

# The two large primes take about a minute each on one core:
#     rep = table1(100019, workers=8)
#     assert rep.bins == REFERENCE_BINS[100019]
print(REFERENCE_BINS)
