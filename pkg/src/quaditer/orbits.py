"""Trajectory analysis: tails, cycles and the critical orbit."""
from __future__ import annotations

from typing import Callable, NamedTuple, Optional

import numpy as np

from .field import (
    AnyMap,
    CubicMap,
    QuadMap,
    multiplicative_order,
    _residue,
)

__all__ = [
    "OrbitShape",
    "CollisionPair",
    "orbit_shape",
    "brent_cycle",
    "squaring_cycle_length_prediction",
    "permutation_cycle_length",
    "cycle_lengths_from_zero",
    "critical_orbit",
    "critical_orbit_distinct",
    "first_recurrence",
    "functional_graph",
]


class OrbitShape(NamedTuple):
    """Tail length and cycle length of the trajectory m, f(m), f^2(m), ..."""

    tail: int
    cycle: int


class CollisionPair(NamedTuple):
    i: int
    j: int


def brent_cycle(step: Callable[[int], int], x0: int) -> OrbitShape:
    """Brent's cycle detection followed by the exact tail search.

    Returns the minimal (tail, cycle) for the sequence x0, step(x0), ...
    """
    power = lam = 1
    tortoise, hare = x0, step(x0)
    while tortoise != hare:
        if power == lam:
            tortoise = hare
            power *= 2
            lam = 0
        hare = step(hare)
        lam += 1

    tortoise = hare = x0
    for _ in range(lam):
        hare = step(hare)
    mu = 0
    while tortoise != hare:
        tortoise = step(tortoise)
        hare = step(hare)
        mu += 1
    return OrbitShape(mu, lam)


def orbit_shape(f: AnyMap, m) -> OrbitShape:
    return brent_cycle(f, _residue(f, m))


def squaring_cycle_length_prediction(p: int, m: int) -> int:
    """Predicted cycle length of m under X -> X^2 mod p.

    For m of odd multiplicative order r the trajectory m^(2^j) is purely
    periodic with period ord_r(2).
    """
    m %= p
    if m == 0:
        raise ValueError("m = 0 is a fixed point with no multiplicative order")
    r = multiplicative_order(m, p)
    if r % 2 == 0:
        raise ValueError(f"ord_p({m}) = {r} is even; the prediction needs odd order")
    return multiplicative_order(2, r)


def permutation_cycle_length(g: CubicMap) -> int:
    """Least l >= 1 with g^l(0) = 0.

    g is a bijection, so the trajectory of 0 is purely periodic and a plain
    first-return loop is enough.
    """
    if not isinstance(g, CubicMap):
        raise TypeError("permutation_cycle_length expects a CubicMap")
    x, steps = g(0), 1
    while x != 0:
        x = g(x)
        steps += 1
    return steps


def cycle_lengths_from_zero(p: int, cs: np.ndarray) -> np.ndarray:
    """l(c, p) for every c in ``cs`` at once (vectorised first return to 0).

    Iterates X^3 + c for all c simultaneously, dropping the finished ones, so
    the total work is sum(l(c, p)) elementwise steps.  Needs p < 2**31.
    """
    if p % 3 != 2:
        raise ValueError("p must be 2 mod 3")
    if p >= 1 << 31:
        raise ValueError("vectorised cycle lengths need p < 2**31")
    c = np.asarray(cs, dtype=np.int64) % p
    out = np.zeros(c.size, dtype=np.int64)
    idx = np.arange(c.size)
    x = c.copy()
    steps = 1
    while idx.size:
        done = x == 0
        if done.any():
            out[idx[done]] = steps
            keep = ~done
            x, c, idx = x[keep], c[keep], idx[keep]
        x = ((x * x) % p * x + c) % p
        steps += 1
        if steps > p + 1:
            raise RuntimeError("trajectory failed to return to 0; is X^3 + c a permutation?")
    return out


def critical_orbit(f: QuadMap, r: int) -> list[int]:
    """[f^0(0), f^1(0), ..., f^r(0)]."""
    out = [0]
    for _ in range(r):
        out.append(f(out[-1]))
    return out


def critical_orbit_distinct(f: QuadMap, r: int) -> tuple[bool, Optional[CollisionPair]]:
    """Whether f^0(0), ..., f^r(0) are pairwise distinct.

    On failure also returns the first collision (smallest j, then i).
    """
    if r < 0:
        raise ValueError("r must be non-negative")
    seen = {0: 0}
    x = 0
    for j in range(1, r + 1):
        x = f(x)
        if x in seen:
            return False, CollisionPair(seen[x], j)
        seen[x] = j
    return True, None


def first_recurrence(f: QuadMap) -> CollisionPair:
    """Minimal (i, j) with f^i(0) = f^j(0); j <= p by pigeonhole."""
    seen = {0: 0}
    x, j = 0, 0
    while True:
        x = f(x)
        j += 1
        if x in seen:
            return CollisionPair(seen[x], j)
        seen[x] = j


def functional_graph(f: AnyMap, *, max_p: int = 10**6) -> np.ndarray:
    """Successor array ``succ[m] = f(m)`` (debugging aid for small p)."""
    if f.ctx.p > max_p:
        raise ValueError(f"functional graph limited to p <= {max_p}")
    return f.apply_array(f.ctx.elements())
