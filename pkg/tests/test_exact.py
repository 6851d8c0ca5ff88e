import math
import warnings
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, strategies as st

from quaditer.exact import (
    DyadicRational,
    InexactWarning,
    check_nu_bounds,
    curve_count,
    curve_count_table,
    eval_coeffs,
    falling_coeffs,
    harmonic,
    log_lower_bound,
    moment_from_weights,
    mu,
    mu_float,
    nu,
    nu_pair,
    nu_pair_by_recurrence,
    nu_weights,
    nu_zero_weight,
)


def mu_fraction(r):
    m = Fraction(1)
    for _ in range(r):
        m -= m * m / 2
    return m


def stirling_first_unsigned(n):
    # row n of c(n, k) by c(n+1, k) = n c(n, k) + c(n, k-1)
    row = [1]
    for m in range(n):
        row = [(m * (row[k] if k < len(row) else 0)) + (row[k - 1] if k else 0)
               for k in range(len(row) + 1)]
    return row


def series_mul(a, b, n):
    return [sum(a[i] * b[k - i] for i in range(k + 1)) for k in range(n)]


def series_sqrt(a, n):
    # a[0] == 1
    s = [Fraction(1)] + [Fraction(0)] * (n - 1)
    for k in range(1, n):
        s[k] = (a[k] - sum(s[i] * s[k - i] for i in range(1, k))) / 2
    return s


def egf_counts(r, n, literal=False):
    e = [Fraction(1, math.factorial(k)) for k in range(n)]
    for _ in range(r):
        sq = series_mul(e, e, n)
        half = [(Fraction(k == 0) + v) / 2 for k, v in enumerate(sq)]
        e = series_sqrt(half, n) if literal else half
    return [math.factorial(k) * v for k, v in enumerate(e)]


def test_mu_examples():
    assert mu(0) == 1
    assert mu(1).to_fraction() == Fraction(1, 2)
    assert mu(2).to_fraction() == Fraction(3, 8)
    assert mu(3).to_fraction() == Fraction(39, 128)
    assert str(mu(3)) == "39/2^7"


def test_mu_matches_fraction_oracle():
    for r in range(16):
        assert mu(r).to_fraction() == mu_fraction(r)


def test_mu_denominator_and_monotone():
    prev = mu(0)
    for r in range(1, 21):
        m = mu(r)
        assert m.log2_den == 2**r - 1 and m.numerator % 2 == 1
        assert 0 < m < prev
        prev = m


def test_weights_cap():
    with pytest.raises(ValueError):
        nu_weights(15)


def test_mu_beyond_cap_warns():
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        val = mu(40)
    assert any(issubclass(w.category, InexactWarning) for w in caught)
    assert abs(float(val) - float(mu_float(40))) < 1e-15
    assert abs(float(mu_float(20)) - float(mu(20))) < 1e-15


def test_nu_examples():
    assert nu(0) == 2 and nu(1) == 4 and nu(2) == Fraction(16, 3)


def test_nu_recurrence_agrees():
    for r in range(21):
        assert nu_pair(r) == nu_pair_by_recurrence(r)
        num, den = nu_pair(r)
        m = mu(r)
        assert num * m.numerator == 2 * den * m.denominator


def test_nu_bounds():
    assert all(check_nu_bounds(r) for r in range(1, 26))
    for r in range(1, 12):
        assert r + 2 <= nu(r) <= r + 2 + harmonic(r)


@pytest.mark.parametrize("n, gap", [(1, 1e-50), (2, 1e-50), (3, 1e-50), (25, 1e-50), (10**6, 1e-45)])
def test_log_lower_bound(n, gap):
    lb = log_lower_bound(n)
    with mpmath.workdps(60):
        exact_log = mpmath.log(n)
        lb_mp = mpmath.mpf(lb.numerator) / lb.denominator
        assert lb_mp <= exact_log and exact_log - lb_mp < gap


def test_curve_counts_rows():
    table = curve_count_table(3, 5)
    assert table[0] == (1,) * 6
    assert table[1] == (1, 1, 2, 4, 8, 16)
    assert table[2] == (1, 1, 3, 10, 36, 136)
    assert table[3] == (1, 1, 4, 19, 103, 616)


def test_curve_count_properties():
    for r in range(8):
        assert curve_count(r, 0) == 1 and curve_count(r, 1) == 1
        assert curve_count(r, 2) == r + 1
        for k in range(1, 10):
            assert curve_count(r, k) <= math.factorial(k) * (r + 1) ** (k - 1)


def test_corrected_egf_matches_recurrence():
    for r in range(5):
        assert egf_counts(r, 9) == [curve_count(r, k) for k in range(9)]


def test_literal_egf_gives_non_integers():
    # squaring the left side breaks integrality at the first step
    counts = egf_counts(1, 4, literal=True)
    assert counts[1] == Fraction(1, 2) and counts[2] == Fraction(3, 4)


def test_weight_examples():
    assert dict(nu_weights(0).items()) == {1: 1}
    assert {m: w.to_fraction() for m, w in nu_weights(1).items()} == {
        0: Fraction(1, 2), 2: Fraction(1, 2)}
    assert {m: w.to_fraction() for m, w in nu_weights(2).items()} == {
        0: Fraction(5, 8), 2: Fraction(1, 4), 4: Fraction(1, 8)}


def test_weights_consistency():
    for r in range(0, 15):
        w = nu_weights(r)
        assert w.total() == 1
        assert set(w.support()) <= set(range(2**r + 1))
        if r:
            assert w[0] == nu_zero_weight(r)
            assert 1 - w[0] == mu(r)
    for r in range(7):
        for k in range(13):
            assert moment_from_weights(r, k) == curve_count(r, k)
    assert moment_from_weights(2, 2) == 3 and moment_from_weights(1, 3) == 4


def test_zero_weight_recurrence():
    prev = DyadicRational(0, 0)
    for r in range(1, 21):
        cur = nu_zero_weight(r)
        assert cur == (1 + prev * prev).half()
        assert mu(r) == 1 - cur
        prev = cur


def test_coeffs_example():
    assert falling_coeffs(1) == (1, Fraction(-3, 2), Fraction(1, 2))


@pytest.mark.parametrize("r", range(1, 5))
def test_coeffs_match_stirling(r):
    n = 2**r
    c = stirling_first_unsigned(n + 1)
    expected = tuple(Fraction((-1) ** k * c[k + 1], math.factorial(n)) for k in range(n + 1))
    assert falling_coeffs(r) == expected
    assert falling_coeffs(r)[n] == Fraction(1, math.factorial(n))


@pytest.mark.parametrize("r", range(0, 4))
def test_coeffs_are_zero_indicator(r):
    cs = falling_coeffs(r)
    assert [eval_coeffs(cs, t) for t in range(2**r + 1)] == [1] + [0] * 2**r


@given(st.integers(-10**30, 10**30), st.integers(0, 200),
       st.integers(-10**30, 10**30), st.integers(0, 200))
def test_dyadic_arithmetic_matches_fraction(n1, e1, n2, e2):
    x, y = DyadicRational(n1, e1), DyadicRational(n2, e2)
    fx, fy = Fraction(n1, 2**e1), Fraction(n2, 2**e2)
    assert (x + y).to_fraction() == fx + fy
    assert (x - y).to_fraction() == fx - fy
    assert (x * y).to_fraction() == fx * fy
    assert x.half().to_fraction() == fx / 2
    assert (x < y) == (fx < fy) and (x == y) == (fx == fy)
