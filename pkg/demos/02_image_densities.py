"""How much of the field survives r iterations?

The image f^r(F_p) has about mu_r p elements, where mu_0 = 1 and
mu_{r+1} = mu_r - mu_r^2 / 2.  These are exact dyadic rationals.
"""
from quaditer import FieldContext, QuadMap, mu, nu, check_nu_bounds
from quaditer.moments import image_sizes

# %% the exact densities
for r in range(6):
    print(r, mu(r), float(mu(r)))

# The denominator of mu_r is 2^(2^r - 1), so the numbers grow fast.
print("mu_20 has", mu(20).numerator.bit_length(), "bits")

# %% nu_r = 2 / mu_r grows like r
for r in (1, 2, 5, 10, 20):
    print(r, float(nu(r)) if r < 12 else "(large)", check_nu_bounds(r))

# %% compare with actual image sizes
p = 100003
f = QuadMap(FieldContext(p), 1, 1)
for r, size in enumerate(image_sizes(f, 6)):
    main = float(mu(r)) * p
    print(f"r={r}  #f^r = {size:6d}  mu_r p = {main:10.1f}  "
          f"(dev)/sqrt(p) = {(size - main) / p**0.5:+.3f}")
