"""Pollard rho, and why a X^2 + c is the general quadratic.

Iterating x -> x^2 + 1 modulo N = q1 q2 runs around a rho of length about
sqrt(q1) modulo the smaller factor, and gcd spots the collision.
"""
from quaditer import FieldContext, GeneralQuadMap
from quaditer.experiments import factor_with_restarts, pollard_rho, random_semiprimes, translate_general_quadratic

# %% small cases
print(pollard_rho(15), pollard_rho(91), pollard_rho(8051))

# %% seeded semiprimes
for q1, q2 in random_semiprimes(5, seed=1):
    N = q1 * q2
    print(N, (q1, q2), factor_with_restarts(N))

# %% conjugation: a X^2 + b X + c is a X^2 + c' after shifting by d
p = 7
a, c2, d = translate_general_quadratic(p, 1, 2, 0)
print(f"X^2 + 2X over F_7 -> X^2 + {c2}, shift d = {d}")
f = GeneralQuadMap(FieldContext(p), 1, 2, 0)
print([f(m) for m in range(p)])
print([((m - d) ** 2 + c2 + d) % p for m in range(p)])
