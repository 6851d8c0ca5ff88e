"""Exact arithmetic for the closed-form quantities: the image densities mu_r,
nu_r = 2/mu_r, the curve counts N(r;k), the exponential weights nu(r;m) and
the indicator-polynomial coefficients C_{r,k}.

Everything on the asserted path is an exact integer, dyadic rational or
:class:`fractions.Fraction`.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial

import mpmath

try:  # gmpy2 multiplies multi-million-bit integers far faster than int
    import gmpy2

    def _square(n: int) -> int:
        m = gmpy2.mpz(n)
        return int(m * m)

except ImportError:  # pragma: no cover

    def _square(n: int) -> int:
        return n * n


__all__ = [
    "DyadicRational",
    "InexactWarning",
    "MU_EXACT_CAP",
    "WEIGHTS_CAP",
    "mu",
    "mu_float",
    "nu",
    "nu_pair",
    "nu_pair_by_recurrence",
    "nu_zero_weight",
    "log_lower_bound",
    "harmonic",
    "check_nu_bounds",
    "curve_count",
    "curve_count_table",
    "ExpWeightVector",
    "nu_weights",
    "moment_from_weights",
    "falling_coeffs",
    "eval_coeffs",
]

MU_EXACT_CAP = 25
# nu(r; m) has 2^(r-1)+1 nonzero weights of ~2^r bits each; past this the
# table no longer fits comfortably in memory.
WEIGHTS_CAP = 14


class InexactWarning(UserWarning):
    """A value was computed in floating point instead of exactly."""


@dataclass(frozen=True, order=False)
class DyadicRational:
    """numerator / 2**log2_den, kept reduced (odd numerator unless zero)."""

    numerator: int
    log2_den: int = 0

    def __post_init__(self):
        n, e = self.numerator, self.log2_den
        if n == 0:
            e = 0
        elif e > 0:
            tz = min((n & -n).bit_length() - 1, e)
            n >>= tz
            e -= tz
        elif e < 0:
            n <<= -e
            e = 0
        object.__setattr__(self, "numerator", n)
        object.__setattr__(self, "log2_den", e)

    @property
    def denominator(self) -> int:
        return 1 << self.log2_den

    def _align(self, other: "DyadicRational") -> tuple[int, int, int]:
        e = max(self.log2_den, other.log2_den)
        return (
            self.numerator << (e - self.log2_den),
            other.numerator << (e - other.log2_den),
            e,
        )

    @staticmethod
    def _coerce(x) -> "DyadicRational":
        if isinstance(x, DyadicRational):
            return x
        if isinstance(x, int):
            return DyadicRational(x)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b, e = self._align(other)
        return DyadicRational(a + b, e)

    __radd__ = __add__

    def __neg__(self):
        return DyadicRational(-self.numerator, self.log2_den)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return DyadicRational(self.numerator * other.numerator, self.log2_den + other.log2_den)

    __rmul__ = __mul__

    def half(self) -> "DyadicRational":
        return DyadicRational(self.numerator, self.log2_den + 1)

    def __eq__(self, other):
        if isinstance(other, DyadicRational):
            return self.numerator == other.numerator and self.log2_den == other.log2_den
        if isinstance(other, int):
            return self.log2_den == 0 and self.numerator == other
        if isinstance(other, Fraction):
            return self.to_fraction() == other
        return NotImplemented

    def __hash__(self):
        return hash((self.numerator, self.log2_den))

    def __lt__(self, other):
        other = self._coerce(other)
        a, b, _ = self._align(other)
        return a < b

    def __le__(self, other):
        other = self._coerce(other)
        a, b, _ = self._align(other)
        return a <= b

    def __gt__(self, other):
        return not self <= other

    def __ge__(self, other):
        return not self < other

    def to_fraction(self) -> Fraction:
        return Fraction(self.numerator, self.denominator)

    def __float__(self):
        return float(self.to_fraction()) if self.log2_den < 1000 else float(
            mpmath.ldexp(mpmath.mpf(self.numerator), -self.log2_den)
        )

    def __str__(self):
        if self.log2_den == 0:
            return str(self.numerator)
        return f"{self.numerator}/2^{self.log2_den}"

    def __repr__(self):
        return f"DyadicRational({self})"


@lru_cache(maxsize=None)
def _mu_pair(r: int) -> tuple[int, int]:
    # mu_r = n / 2^e with e = 2^r - 1; unreduced form keeps the update cheap.
    if r == 0:
        return 1, 0
    n, e = _mu_pair(r - 1)
    return (n << (e + 1)) - _square(n), 2 * e + 1


def mu(r: int):
    """Image density mu_r: mu_0 = 1, mu_{r+1} = mu_r - mu_r^2 / 2.

    Exact (a :class:`DyadicRational`) for ``r <= MU_EXACT_CAP``; beyond that a
    256-bit float is returned and an :class:`InexactWarning` is raised.
    """
    if r < 0:
        raise ValueError("r must be non-negative")
    if r > MU_EXACT_CAP:
        warnings.warn(f"mu({r}) exceeds the exact cap {MU_EXACT_CAP}", InexactWarning, stacklevel=2)
        return mu_float(r)
    n, e = _mu_pair(r)
    return DyadicRational(n, e)


def mu_float(r: int, prec: int = 256) -> mpmath.mpf:
    with mpmath.workprec(prec):
        m = mpmath.mpf(1)
        for _ in range(r):
            m = m - m * m / 2
        return +m


def nu_pair(r: int) -> tuple[int, int]:
    """nu_r = 2 / mu_r as a coprime (numerator, denominator) pair."""
    n, e = _mu_pair(r)
    # n is odd for r >= 1 (and n = 1 at r = 0), so this is already reduced
    return 1 << (e + 1), n


def nu(r: int) -> Fraction:
    num, den = nu_pair(r)
    return Fraction(num, den)


def nu_pair_by_recurrence(r: int) -> tuple[int, int]:
    """nu_r from nu_0 = 2, nu_{r+1} = nu_r + 1 + 1/(nu_r - 1), unreduced."""
    a, b = 2, 1
    for _ in range(r):
        # a/b + 1 + b/(a - b)  over the common denominator b (a - b)
        a, b = (a + b) * (a - b) + b * b, b * (a - b)
    return a, b


def nu_zero_weight(r: int) -> DyadicRational:
    """nu(r; 0) from its own recurrence nu(r;0) = (1 + nu(r-1;0)^2) / 2."""
    v = DyadicRational(0)
    for _ in range(r):
        v = (1 + v * v).half()
    return v


def _atanh_series(y: Fraction, terms: int) -> Fraction:
    # 2 * sum_k y^(2k+1) / (2k+1), a lower bound for log((1+y)/(1-y)) when y >= 0
    y2, power, total = y * y, y, Fraction(0)
    for k in range(terms):
        total += power / (2 * k + 1)
        power *= y2
    return 2 * total


def log_lower_bound(n: int, terms: int = 60) -> Fraction:
    """A rational L with L <= log(n), for integer n >= 1.

    Writes n = 2^s m with 1 <= m < 2 and sums truncated atanh series for
    log 2 and log m (both arguments <= 1/3).  Every dropped term is positive,
    so each partial sum is a certified lower bound.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    s = n.bit_length() - 1
    log2 = _atanh_series(Fraction(1, 3), terms)
    return s * log2 + _atanh_series(Fraction(n - (1 << s), n + (1 << s)), terms)


def harmonic(r: int) -> Fraction:
    return sum((Fraction(1, j) for j in range(1, r + 1)), Fraction(0))


def check_nu_bounds(r: int) -> bool:
    """Exact check of r + 2 <= nu_r, nu_r <= r + 2 + H_r and nu_r <= r + 3 + log r.

    Stated for r >= 1.  The comparison against log r goes through a certified
    rational lower bound for log r, so ``True`` is a proof for this r.
    """
    if r < 1:
        raise ValueError("bounds are stated for r >= 1")
    a, b = nu_pair(r)
    if a < (r + 2) * b:
        return False
    h = harmonic(r)
    upper_h = r + 2 + h
    if a * upper_h.denominator > upper_h.numerator * b:
        return False
    upper_log = r + 3 + log_lower_bound(r)
    return a * upper_log.denominator <= upper_log.numerator * b


def _curve_row(prev: list[int], kmax: int) -> list[int]:
    row = [1]
    for k in range(1, kmax + 1):
        total = sum(comb(k, a) * prev[a] * prev[k - a] for a in range(k + 1))
        if total % 2:
            raise ArithmeticError(f"odd convolution sum at k={k}")
        row.append(total // 2)
    return row


@lru_cache(maxsize=None)
def curve_count_table(rmax: int, kmax: int) -> tuple[tuple[int, ...], ...]:
    """Rows r = 0..rmax of N(r;k), k = 0..kmax.

    N(0;k) = 1 and N(r;k) = (1/2) sum_a C(k,a) N(r-1;a) N(r-1;k-a) for k >= 1.
    """
    rows = [[1] * (kmax + 1)]
    for _ in range(rmax):
        rows.append(_curve_row(rows[-1], kmax))
    return tuple(tuple(row) for row in rows)


def curve_count(r: int, k: int) -> int:
    if r < 0 or k < 0:
        raise ValueError("r and k must be non-negative")
    return curve_count_table(r, k)[r][k]


def _kronecker_square(vals: list[int]) -> list[int]:
    """Self-convolution of a non-negative integer vector via one big multiply.

    Values are packed into fixed-width byte slots, so packing and unpacking
    are linear; the multiply uses gmpy2 when it is installed.
    """
    if not vals:
        return []
    bits = 2 * max(v.bit_length() for v in vals) + len(vals).bit_length() + 1
    width = (bits + 7) // 8
    packed = int.from_bytes(b"".join(v.to_bytes(width, "little") for v in vals), "little")
    sq = _square(packed)
    n_out = 2 * len(vals) - 1
    raw = sq.to_bytes(n_out * width, "little")
    return [int.from_bytes(raw[i * width:(i + 1) * width], "little") for i in range(n_out)]


@dataclass(frozen=True)
class ExpWeightVector:
    """Weights nu(r; m), m = 0..2^r, stored as integers over 2^log2_den.

    ``numerators[m] / 2**log2_den`` is the weight of exp(m X) in E(X; r).
    """

    r: int
    numerators: tuple[int, ...]
    log2_den: int

    def __getitem__(self, m: int) -> DyadicRational:
        if 0 <= m < len(self.numerators):
            return DyadicRational(self.numerators[m], self.log2_den)
        return DyadicRational(0)

    def __len__(self):
        return len(self.numerators)

    def support(self) -> list[int]:
        return [m for m, n in enumerate(self.numerators) if n]

    def total(self) -> DyadicRational:
        return DyadicRational(sum(self.numerators), self.log2_den)

    def items(self):
        for m in self.support():
            yield m, self[m]


@lru_cache(maxsize=None)
def nu_weights(r: int) -> ExpWeightVector:
    """Weights of E(X; r) = sum_m nu(r;m) e^{mX}.

    Built from E(X; 0) = e^X and E(X; r) = (1 + E(X; r-1)^2) / 2, i.e. the
    weight vector is self-convolved, 1 is added at m = 0, and it is halved.
    """
    if r < 0:
        raise ValueError("r must be non-negative")
    if r > WEIGHTS_CAP:
        raise ValueError(f"nu_weights is capped at r <= {WEIGHTS_CAP}")
    if r == 0:
        return ExpWeightVector(0, (0, 1), 0)
    prev = nu_weights(r - 1)
    e = prev.log2_den
    if r == 1:
        sq = _kronecker_square(list(prev.numerators))
    else:
        # support of nu(r-1; .) is on even m: convolve the compressed vector
        half = _kronecker_square(list(prev.numerators[::2]))
        sq = [0] * (2 * len(prev.numerators) - 1)
        sq[::2] = half
    sq[0] += 1 << (2 * e)
    return ExpWeightVector(r, tuple(sq), 2 * e + 1)


def moment_from_weights(r: int, k: int) -> int:
    """sum_m nu(r;m) m^k; equals N(r;k)."""
    w = nu_weights(r)
    total = sum(n * m**k for m, n in enumerate(w.numerators) if n)
    q, rem = divmod(total, 1 << w.log2_den)
    if rem:
        raise ArithmeticError(f"moment_from_weights({r}, {k}) is not an integer")
    return q


@lru_cache(maxsize=None)
def falling_coeffs(r: int) -> tuple[Fraction, ...]:
    """C_{r,k}: coefficients of prod_{j=1}^{2^r} (j - T) / (2^r)!.

    The polynomial is 1 at T = 0 and vanishes at T = 1..2^r.
    """
    if r < 0:
        raise ValueError("r must be non-negative")
    if r > 6:
        raise ValueError("falling_coeffs is limited to r <= 6")
    n = 1 << r
    poly = [1]
    for j in range(1, n + 1):
        nxt = [0] * (len(poly) + 1)
        for i, c in enumerate(poly):
            nxt[i] += j * c
            nxt[i + 1] -= c
        poly = nxt
    den = factorial(n)
    return tuple(Fraction(c, den) for c in poly)


def eval_coeffs(coeffs, t) -> Fraction:
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * t + c
    return acc
