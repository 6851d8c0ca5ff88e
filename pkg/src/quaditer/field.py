"""Prime-field arithmetic and the polynomial maps iterated over it.

Only odd prime fields F_p are supported.  Elements are canonical residues in
``[0, p-1]``; hot loops work directly on Python ints (or int64 numpy arrays
when ``p < 2**31``) and the :class:`FieldElement` wrapper is provided for
callers who want context checking.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from math import gcd
from typing import Union

import numpy as np

__all__ = [
    "ContextMismatch",
    "FieldContext",
    "FieldElement",
    "QuadMap",
    "GeneralQuadMap",
    "CubicMap",
    "is_prime",
    "factorize",
    "multiplicative_order",
    "map_eval",
    "iterate",
    "phi_eval",
    "verify_factorization",
    "iterate_array",
]

# Deterministic for n < 3.3e24, which covers every 64-bit input.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

# numpy int64 products of two residues stay exact below this modulus
_INT64_SAFE_P = 1 << 31


class ContextMismatch(ValueError):
    """Raised when elements or maps from different fields are combined."""


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin primality test for 64-bit inputs."""
    if n < 2:
        return False
    for q in _MR_BASES:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _brent_split(n: int) -> int:
    # Pollard-Brent; only used internally to factor p-1 for order computations.
    rng = random.Random(n)
    while True:
        y, c, m = rng.randrange(1, n), rng.randrange(1, n), 128
        g = r = q = 1
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = gcd(abs(x - ys), n)
        if g != n:
            return g


def factorize(n: int) -> dict[int, int]:
    """Prime factorisation ``{prime: exponent}`` of a positive integer."""
    if n < 1:
        raise ValueError("factorize expects a positive integer")
    out: dict[int, int] = {}
    for q in (2, 3, 5):
        while n % q == 0:
            out[q] = out.get(q, 0) + 1
            n //= q
    q = 7
    while q * q <= n and q < 10_000:
        while n % q == 0:
            out[q] = out.get(q, 0) + 1
            n //= q
        q += 2
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if is_prime(m):
            out[m] = out.get(m, 0) + 1
        else:
            d = _brent_split(m)
            stack.extend((d, m // d))
    return dict(sorted(out.items()))


def multiplicative_order(m: int, n: int) -> int:
    """Order of ``m`` in (Z/nZ)^*; ``n == 1`` gives 1."""
    if n == 1:
        return 1
    m %= n
    if gcd(m, n) != 1:
        raise ValueError(f"{m} is not a unit modulo {n}")
    phi = 1
    for q, e in factorize(n).items():
        phi *= (q - 1) * q ** (e - 1)
    order = phi
    for q in factorize(phi):
        while order % q == 0 and pow(m, order // q, n) == 1:
            order //= q
    return order


def _prime_power_root(q: int) -> int | None:
    for e in range(2, q.bit_length() + 1):
        b = round(q ** (1.0 / e))
        for cand in (b - 1, b, b + 1):
            if cand > 1 and cand**e == q and is_prime(cand):
                return cand
    return None


@dataclass(frozen=True)
class FieldContext:
    """The prime field F_p for an odd prime ``p < 2**64``."""

    p: int

    def __post_init__(self):
        p = self.p
        if not isinstance(p, (int, np.integer)) or isinstance(p, bool):
            raise TypeError("field modulus must be an integer")
        object.__setattr__(self, "p", int(p))
        if p >= 1 << 64:
            raise ValueError("modulus exceeds the 64-bit range")
        if p == 2:
            raise ValueError("characteristic 2 is not supported")
        if not is_prime(p):
            root = _prime_power_root(p) if p > 3 else None
            if root is not None:
                raise ValueError(f"extension fields are not supported (q = {root}^e)")
            raise ValueError(f"{p} is not prime")

    @property
    def vectorizable(self) -> bool:
        return self.p < _INT64_SAFE_P

    def __call__(self, value: int) -> "FieldElement":
        return FieldElement(int(value) % self.p, self)

    def elements(self) -> np.ndarray:
        return np.arange(self.p, dtype=np.int64)

    def half(self) -> int:
        return (self.p + 1) // 2

    def inv(self, x: int) -> int:
        x %= self.p
        if x == 0:
            raise ZeroDivisionError("0 has no inverse")
        return pow(x, -1, self.p)


@dataclass(frozen=True)
class FieldElement:
    value: int
    ctx: FieldContext

    def __post_init__(self):
        if not 0 <= self.value < self.ctx.p:
            raise ValueError("FieldElement value must be a canonical residue")

    def _other(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.ctx != self.ctx:
                raise ContextMismatch(f"F_{self.ctx.p} vs F_{other.ctx.p}")
            return other.value
        if isinstance(other, (int, np.integer)):
            return int(other) % self.ctx.p
        return NotImplemented

    def _wrap(self, v: int) -> "FieldElement":
        return FieldElement(v % self.ctx.p, self.ctx)

    def __add__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.value + o)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.value - o)

    def __rsub__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else self._wrap(o - self.value)

    def __mul__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.value * o)

    __rmul__ = __mul__

    def __neg__(self):
        return self._wrap(-self.value)

    def __pow__(self, n: int):
        return self._wrap(pow(self.value, n, self.ctx.p))

    def __truediv__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return self._wrap(self.value * self.ctx.inv(o))

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.ctx == other.ctx and self.value == other.value
        if isinstance(other, (int, np.integer)):
            return self.value == int(other) % self.ctx.p
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.ctx.p))

    def __int__(self):
        return self.value

    def __index__(self):
        return self.value

    def __repr__(self):
        return f"{self.value} (mod {self.ctx.p})"


class _Map:
    ctx: FieldContext

    def __call__(self, x: int) -> int:  # pragma: no cover - abstract
        raise NotImplementedError

    def apply_array(self, xs: np.ndarray) -> np.ndarray:  # pragma: no cover
        raise NotImplementedError

    def _check_array_path(self):
        if not self.ctx.vectorizable:
            raise ValueError(
                f"array evaluation needs p < 2**31 (got p = {self.ctx.p})"
            )


@dataclass(frozen=True)
class QuadMap(_Map):
    """f(X) = a X^2 + c over F_p with a != 0."""

    ctx: FieldContext
    a: int
    c: int

    def __post_init__(self):
        p = self.ctx.p
        object.__setattr__(self, "a", int(self.a) % p)
        object.__setattr__(self, "c", int(self.c) % p)
        if self.a == 0:
            raise ValueError("QuadMap requires a != 0")

    @classmethod
    def monic(cls, p: int, c: int) -> "QuadMap":
        return cls(FieldContext(p), 1, c)

    def __call__(self, x: int) -> int:
        return (self.a * x * x + self.c) % self.ctx.p

    def apply_array(self, xs: np.ndarray) -> np.ndarray:
        self._check_array_path()
        p = self.ctx.p
        sq = (xs * xs) % p
        if self.a != 1:
            sq = (sq * self.a) % p
        return (sq + self.c) % p

    def __str__(self):
        lead = "" if self.a == 1 else f"{self.a}*"
        return f"{lead}X^2 + {self.c} over F_{self.ctx.p}"


@dataclass(frozen=True)
class GeneralQuadMap(_Map):
    """f(X) = a X^2 + b X + c, used for the conjugation utilities."""

    ctx: FieldContext
    a: int
    b: int
    c: int

    def __post_init__(self):
        p = self.ctx.p
        for name in ("a", "b", "c"):
            object.__setattr__(self, name, int(getattr(self, name)) % p)
        if self.a == 0:
            raise ValueError("GeneralQuadMap requires a != 0")

    def __call__(self, x: int) -> int:
        return ((self.a * x + self.b) * x + self.c) % self.ctx.p

    def apply_array(self, xs: np.ndarray) -> np.ndarray:
        self._check_array_path()
        p = self.ctx.p
        return (((self.a * xs + self.b) % p) * xs + self.c) % p


@dataclass(frozen=True)
class CubicMap(_Map):
    """g(X) = X^3 + c over F_p with p = 2 (mod 3), hence a permutation."""

    ctx: FieldContext
    c: int

    def __post_init__(self):
        if self.ctx.p % 3 != 2:
            raise ValueError(f"CubicMap requires p = 2 mod 3 (got p = {self.ctx.p})")
        object.__setattr__(self, "c", int(self.c) % self.ctx.p)

    def __call__(self, x: int) -> int:
        return (x * x * x + self.c) % self.ctx.p

    def apply_array(self, xs: np.ndarray) -> np.ndarray:
        self._check_array_path()
        p = self.ctx.p
        return (((xs * xs) % p) * xs + self.c) % p


AnyMap = Union[QuadMap, GeneralQuadMap, CubicMap]


def _residue(f: _Map, x) -> int:
    if isinstance(x, FieldElement):
        if x.ctx != f.ctx:
            raise ContextMismatch(f"element of F_{x.ctx.p} given to map over F_{f.ctx.p}")
        return x.value
    return int(x) % f.ctx.p


def map_eval(f: AnyMap, x) -> FieldElement:
    """f(x) as a canonical residue bound to the map's field."""
    return FieldElement(f(_residue(f, x)), f.ctx)


def iterate(f: AnyMap, x, n: int) -> FieldElement:
    """f^n(x), with f^0 the identity."""
    if n < 0:
        raise ValueError("iteration count must be non-negative")
    v = _residue(f, x)
    for _ in range(n):
        v = f(v)
    return FieldElement(v, f.ctx)


def phi_eval(f: QuadMap, x, y, d: int) -> FieldElement:
    """phi(x, y; d): x - y for d = -1, else f^d(x) + f^d(y)."""
    if d < -1:
        raise ValueError("d must be >= -1")
    xv, yv = _residue(f, x), _residue(f, y)
    p = f.ctx.p
    if d == -1:
        return FieldElement((xv - yv) % p, f.ctx)
    for _ in range(d):
        xv, yv = f(xv), f(yv)
    return FieldElement((xv + yv) % p, f.ctx)


def iterate_array(f: AnyMap, r: int, xs: np.ndarray | None = None) -> np.ndarray:
    """f^r applied elementwise; defaults to every element of the field."""
    out = f.ctx.elements() if xs is None else np.asarray(xs, dtype=np.int64)
    for _ in range(r):
        out = f.apply_array(out)
    return out


def verify_factorization(
    f: QuadMap, r: int, *, max_full_grid: int = 1000, samples: int = 20_000, seed: int = 0
) -> bool:
    """Check f^r(x) - f^r(y) against (x - y) * prod_{j<r} (f^j(x) + f^j(y)).

    For monic ``f`` the two sides must agree as field elements.  For ``a != 1``
    only the weaker statement that both sides vanish together is checked.
    Runs on the full p x p grid when ``p <= max_full_grid``, otherwise on a
    seeded random sample of pairs (always including the diagonal x == y).
    """
    if r < 1:
        raise ValueError("r must be >= 1")
    p = f.ctx.p
    if f.ctx.vectorizable:
        if p <= max_full_grid:
            x, y = np.divmod(np.arange(p * p, dtype=np.int64), p)
        else:
            rng = np.random.default_rng(seed)
            x = rng.integers(0, p, size=samples, dtype=np.int64)
            y = rng.integers(0, p, size=samples, dtype=np.int64)
            y[: samples // 10] = x[: samples // 10]
        lhs_x, lhs_y = x, y
        prod = (x - y) % p
        for _ in range(r):
            prod = (prod * ((lhs_x + lhs_y) % p)) % p
            lhs_x, lhs_y = f.apply_array(lhs_x), f.apply_array(lhs_y)
        lhs = (lhs_x - lhs_y) % p
        if f.a == 1:
            return bool(np.array_equal(lhs, prod))
        return bool(np.array_equal(lhs == 0, prod == 0))

    rng = random.Random(seed)
    for i in range(samples):
        xv = rng.randrange(p)
        yv = xv if i % 10 == 0 else rng.randrange(p)
        prod, fx, fy = (xv - yv) % p, xv, yv
        for _ in range(r):
            prod = prod * (fx + fy) % p
            fx, fy = f(fx), f(fy)
        lhs = (fx - fy) % p
        if f.a == 1 and lhs != prod:
            return False
        if f.a != 1 and (lhs == 0) != (prod == 0):
            return False
    return True
