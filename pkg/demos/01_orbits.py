"""Trajectories of x -> a x^2 + c over a prime field.

Every trajectory is eventually periodic.  Its shape is a tail followed by a
cycle, and the trajectory of 0 (the critical orbit) is the one that matters
for image sizes.
"""
from quaditer import FieldContext, QuadMap, critical_orbit_distinct, first_recurrence, iterate, orbit_shape
from quaditer.orbits import critical_orbit, squaring_cycle_length_prediction

# %% a first trajectory
F = FieldContext(11)
square = QuadMap(F, 1, 0)
print("X^2 mod 11 from 3:", [int(iterate(square, 3, n)) for n in range(6)])
print("shape:", orbit_shape(square, 3))

# %% pure squaring: the period is the order of 2 modulo ord(m)
for p in (11, 101, 1009):
    m = 3
    try:
        print(p, orbit_shape(QuadMap(FieldContext(p), 1, 0), m),
              "predicted cycle", squaring_cycle_length_prediction(p, m))
    except ValueError as err:
        print(p, "no prediction:", err)

# %% the critical orbit
f = QuadMap(FieldContext(5), 1, 1)
print(critical_orbit(f, 5))
print("distinct up to r=2:", critical_orbit_distinct(f, 2))
print("distinct up to r=3:", critical_orbit_distinct(f, 3))

# X^2 and X^2 - 2 are the degenerate cases
for c in (0, -2):
    g = QuadMap(FieldContext(1009), 1, c)
    print(g, "first recurrence", first_recurrence(g))

# %% a random map returns to an earlier value after roughly sqrt(p) steps
p = 100003
for c in (1, 2, 3, 4, 5):
    i, j = first_recurrence(QuadMap(FieldContext(p), 1, c))
    print(f"c={c}: f^{i}(0) = f^{j}(0), j/sqrt(p) = {j / p**0.5:.2f}")
