import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from quaditer.field import (
    ContextMismatch,
    CubicMap,
    FieldContext,
    GeneralQuadMap,
    QuadMap,
    factorize,
    is_prime,
    iterate,
    iterate_array,
    map_eval,
    multiplicative_order,
    phi_eval,
    verify_factorization,
)


def sieve(n):
    flags = np.ones(n + 1, dtype=bool)
    flags[:2] = False
    for i in range(2, int(n**0.5) + 1):
        if flags[i]:
            flags[i * i :: i] = False
    return flags


def test_miller_rabin_matches_sieve():
    flags = sieve(20000)
    assert [is_prime(n) for n in range(20001)] == flags.tolist()


@pytest.mark.parametrize("n", [2**61 - 1, 2**89 - 1, 18446744073709551557])
def test_large_primes(n):
    assert is_prime(n)


def test_carmichael_and_strong_pseudoprimes_rejected():
    for n in (561, 1105, 3215031751, 3825123056546413051):
        assert not is_prime(n)


@given(st.integers(2, 10**12))
@settings(max_examples=200)
def test_factorize_roundtrip(n):
    fac = factorize(n)
    prod = 1
    for q, e in fac.items():
        assert is_prime(q)
        prod *= q**e
    assert prod == n


def test_context_rejects_bad_moduli():
    for bad in (2, 4, 9, 15, 1, 0, -7, 2**64 + 13):
        with pytest.raises(ValueError):
            FieldContext(bad)
    assert FieldContext(18446744073709551557).p == 18446744073709551557


def test_mixed_contexts_refused():
    a, b = FieldContext(5)(1), FieldContext(7)(1)
    with pytest.raises(ContextMismatch):
        a + b


def test_field_element_arithmetic():
    F = FieldContext(11)
    x = F(7)
    assert int(x * x) == 5
    assert int(x - 3) == 4
    assert int(x / 7) == 1
    assert int(-x) == 4
    assert int(x**10) == 1


def test_map_eval_examples():
    F5 = FieldContext(5)
    assert int(map_eval(QuadMap(F5, 1, 1), 2)) == 0
    assert int(map_eval(QuadMap(FieldContext(101), 17, 42), 0)) == 42
    assert int(map_eval(CubicMap(F5, 1), 4)) == 0


def test_iterate_examples():
    assert int(iterate(QuadMap(FieldContext(11), 1, 0), 3, 4)) == 3
    assert int(iterate(QuadMap(FieldContext(5), 1, 1), 0, 3)) == 0
    f = QuadMap(FieldContext(13), 3, 4)
    assert int(iterate(f, 9, 0)) == 9


def test_phi_examples():
    F11 = FieldContext(11)
    f = QuadMap(F11, 1, 0)
    assert int(phi_eval(f, 7, 3, -1)) == 4
    assert int(phi_eval(f, 7, 3, 0)) == 10
    assert int(phi_eval(QuadMap(FieldContext(5), 1, 1), 2, 3, 1)) == 0


def test_cubic_requires_two_mod_three():
    with pytest.raises(ValueError):
        CubicMap(FieldContext(7), 1)


@pytest.mark.parametrize("p", [int(q) for q in np.flatnonzero(sieve(10**4)) if q % 3 == 2 and q > 2][::40])
def test_cubic_is_bijection(p):
    g = CubicMap(FieldContext(p), 5)
    image = g.apply_array(FieldContext(p).elements())
    assert np.unique(image).size == p


def test_array_path_matches_scalar():
    for f in (QuadMap(FieldContext(1009), 5, 7),
              GeneralQuadMap(FieldContext(1009), 3, 8, 2),
              CubicMap(FieldContext(1013), 11)):
        xs = f.ctx.elements()
        assert f.apply_array(xs).tolist() == [f(int(x)) for x in xs]


def test_array_path_near_int64_limit():
    p = 2147483647
    f = QuadMap(FieldContext(p), p - 1, p - 2)
    xs = np.array([0, 1, p - 1, p // 2, 123456789], dtype=np.int64)
    assert f.apply_array(xs).tolist() == [(-(x * x) - 2) % p for x in xs.tolist()]


def test_iterate_array_is_composition():
    f = QuadMap(FieldContext(101), 1, 3)
    table = iterate_array(f, 4)
    assert table.tolist() == [int(iterate(f, x, 4)) for x in range(101)]


@pytest.mark.parametrize("c", range(6))
def test_factorization_full_grid(c):
    f = QuadMap(FieldContext(101), 1, c)
    assert all(verify_factorization(f, r) for r in range(1, 6))


def test_factorization_carries_a_power_for_general_a():
    # f^r(x) - f^r(y) = a^r (x - y) prod_j (f^j(x) + f^j(y))
    p, a, r = 31, 7, 3
    f = QuadMap(FieldContext(p), a, 4)
    for x in range(p):
        for y in range(p):
            lhs = (int(iterate(f, x, r)) - int(iterate(f, y, r))) % p
            prod = pow(a, r, p) * (x - y)
            for j in range(r):
                prod *= int(iterate(f, x, j)) + int(iterate(f, y, j))
            assert lhs == prod % p
    assert verify_factorization(f, r)


def test_conjugation_relabels_functional_graph():
    # g = f(X + d) - d has the functional graph of f shifted by -d
    F = FieldContext(97)
    a, b, c = 5, 13, 40
    f = GeneralQuadMap(F, a, b, c)
    d = (-b * F.inv(2 * a)) % 97
    g = QuadMap(F, a, (f(d) - d) % 97)
    for m in range(97):
        assert g((m - d) % 97) == (f(m) - d) % 97


@given(st.sampled_from([7, 11, 101, 1009, 65537]), st.integers(1, 10**6))
def test_multiplicative_order_divides_and_is_minimal(p, m):
    m %= p
    if m == 0:
        return
    r = multiplicative_order(m, p)
    assert pow(m, r, p) == 1 and (p - 1) % r == 0
    assert all(pow(m, s, p) != 1 for s in range(1, r))
