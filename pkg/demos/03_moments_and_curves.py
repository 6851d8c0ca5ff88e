"""Preimage counts, their moments, and the integers that predict them.

rho_r(m) counts the x with f^r(x) = m.  Its moments N(r;k) are close to
p times a curve count, and a polynomial identity turns moments back into
the number of m with no preimage.
"""
from quaditer import FieldContext, QuadMap, curve_count, falling_coeffs, moment_from_weights, nu_weights
from quaditer.exact import curve_count_table
from quaditer.moments import moments, rho_histogram, zero_count_via_moments

p = 10007
f = QuadMap(FieldContext(p), 1, 1)

# %% histogram of preimage counts
for r in range(4):
    print(r, rho_histogram(f, r).counts)

# %% moments against p times the curve counts
for r in range(1, 4):
    ms = moments(f, r, 5)
    print(r, [round(n / p, 3) for n in ms], "vs", [curve_count(r, k) for k in range(6)])

# %% the curve counts, and the weights that generate them
for row in curve_count_table(4, 7):
    print(row)
print({m: str(w) for m, w in nu_weights(3).items()})
print([moment_from_weights(3, k) for k in range(6)])

# %% zero count from moments
for r in range(4):
    print(r, [str(c) for c in falling_coeffs(r)][:5], "...")
    print("   zeros:", zero_count_via_moments(f, r), "direct:", rho_histogram(f, r).zeros)
