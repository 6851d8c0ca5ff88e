"""Exact images f^r(F_p), preimage counts rho_r and their moments N(r;k)."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .exact import falling_coeffs
from .field import QuadMap, iterate_array
from .orbits import CollisionPair, critical_orbit_distinct

__all__ = [
    "MemoryBudgetExceeded",
    "HypothesisViolated",
    "DEFAULT_MAX_ELEMENTS",
    "ImageSet",
    "PreimageHistogram",
    "image_iterate",
    "image_sizes",
    "preimage_counts",
    "rho_histogram",
    "moment",
    "moments",
    "zero_count_via_moments",
    "lemma1_deviation",
]

DEFAULT_MAX_ELEMENTS = 1 << 27


class MemoryBudgetExceeded(MemoryError):
    pass


class HypothesisViolated(ValueError):
    """f^i(0) = f^j(0) for some 0 <= i < j <= r, so the moment bounds do not apply."""

    def __init__(self, f: QuadMap, r: int, pair: CollisionPair):
        super().__init__(f"critical orbit of {f} collides at {tuple(pair)} (r = {r})")
        self.collision = pair


def _check_budget(p: int, max_elements: int):
    if p > max_elements:
        raise MemoryBudgetExceeded(f"p = {p} exceeds the element budget {max_elements}")


@dataclass(frozen=True)
class ImageSet:
    """Membership mask of f^r(F_p)."""

    mask: np.ndarray
    r: int

    @property
    def size(self) -> int:
        return int(np.count_nonzero(self.mask))

    @property
    def p(self) -> int:
        return self.mask.size

    def __contains__(self, m) -> bool:
        return bool(self.mask[int(m) % self.mask.size])

    def __len__(self):
        return self.size

    def members(self) -> list[int]:
        return np.flatnonzero(self.mask).tolist()


def _image_passes(f: QuadMap, r: int, max_elements: int):
    p = f.ctx.p
    _check_budget(p, max_elements)
    mask = np.ones(p, dtype=bool)
    yield mask
    for _ in range(r):
        nxt = np.zeros(p, dtype=bool)
        nxt[f.apply_array(np.flatnonzero(mask))] = True
        mask = nxt
        yield mask


def image_iterate(f: QuadMap, r: int, *, max_elements: int = DEFAULT_MAX_ELEMENTS) -> ImageSet:
    """f^r(F_p) by r successive image-of-set passes."""
    if r < 0:
        raise ValueError("r must be non-negative")
    for mask in _image_passes(f, r, max_elements):
        pass
    return ImageSet(mask, r)


def image_sizes(f: QuadMap, rmax: int, *, max_elements: int = DEFAULT_MAX_ELEMENTS) -> list[int]:
    """[#f^0(F_p), ..., #f^rmax(F_p)] in one sweep."""
    return [int(np.count_nonzero(m)) for m in _image_passes(f, rmax, max_elements)]


def preimage_counts(f: QuadMap, r: int, *, max_elements: int = DEFAULT_MAX_ELEMENTS) -> np.ndarray:
    """rho_r(m) for every m in F_p."""
    p = f.ctx.p
    _check_budget(p, max_elements)
    return np.bincount(iterate_array(f, r), minlength=p)


@dataclass(frozen=True)
class PreimageHistogram:
    """counts[v] = #{m : rho_r(m) = v}, for v = 0..2^r."""

    counts: tuple[int, ...]
    r: int
    p: int

    def __post_init__(self):
        if sum(self.counts) != self.p:
            raise ArithmeticError("histogram does not cover the field")
        if sum(v * n for v, n in enumerate(self.counts)) != self.p:
            raise ArithmeticError("preimage counts do not sum to p")

    @property
    def zeros(self) -> int:
        return self.counts[0]

    def moment(self, k: int) -> int:
        if k < 0:
            raise ValueError("k must be non-negative")
        return sum(n * v**k for v, n in enumerate(self.counts) if n)


def rho_histogram(f: QuadMap, r: int, *, max_elements: int = DEFAULT_MAX_ELEMENTS) -> PreimageHistogram:
    if r < 0:
        raise ValueError("r must be non-negative")
    rho = preimage_counts(f, r, max_elements=max_elements)
    hist = np.bincount(rho, minlength=(1 << r) + 1)
    if hist.size > (1 << r) + 1:
        raise ArithmeticError(f"a fibre of f^{r} has more than 2^{r} points")
    return PreimageHistogram(tuple(int(v) for v in hist), r, f.ctx.p)


def moment(f: QuadMap, r: int, k: int) -> int:
    """N(r;k) = sum_m rho_r(m)^k, exact."""
    return rho_histogram(f, r).moment(k)


def moments(f: QuadMap, r: int, kmax: int) -> list[int]:
    """[N(r;0), ..., N(r;kmax)] from a single histogram."""
    hist = rho_histogram(f, r)
    return [hist.moment(k) for k in range(kmax + 1)]


def zero_count_via_moments(
    f: QuadMap, r: int, coeffs: Sequence[Fraction] | None = None
) -> int:
    """#{m : rho_r(m) = 0} as sum_k C_{r,k} N(r;k).

    The indicator polynomial is exact because 0 <= rho_r(m) <= 2^r.
    """
    if coeffs is None:
        coeffs = falling_coeffs(r)
    if len(coeffs) != (1 << r) + 1:
        raise ValueError(f"expected {(1 << r) + 1} coefficients for r = {r}")
    hist = rho_histogram(f, r)
    total = sum((c * hist.moment(k) for k, c in enumerate(coeffs)), Fraction(0))
    if total.denominator != 1:
        raise ArithmeticError(f"non-integral zero count {total}")
    return int(total)


def lemma1_deviation(f: QuadMap, r: int) -> int:
    """N(r;2) - (r+1) p, refused unless f^0(0), ..., f^r(0) are distinct."""
    ok, pair = critical_orbit_distinct(f, r)
    if not ok:
        raise HypothesisViolated(f, r, pair)
    return moment(f, r, 2) - (r + 1) * f.ctx.p
