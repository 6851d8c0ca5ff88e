import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from quaditer.field import CubicMap, FieldContext, QuadMap
from quaditer.orbits import (
    brent_cycle,
    critical_orbit,
    critical_orbit_distinct,
    cycle_lengths_from_zero,
    first_recurrence,
    orbit_shape,
    permutation_cycle_length,
    squaring_cycle_length_prediction,
)


def naive_shape(step, x0):
    seen = {}
    x, i = x0, 0
    while x not in seen:
        seen[x] = i
        x = step(x)
        i += 1
    return seen[x], i - seen[x]


def test_shape_examples():
    assert orbit_shape(QuadMap(FieldContext(7), 1, -2), 2) == (0, 1)
    assert orbit_shape(QuadMap(FieldContext(11), 1, 0), 3) == (0, 4)
    assert orbit_shape(QuadMap(FieldContext(5), 1, 1), 0) == (0, 3)


@given(st.sampled_from([3, 5, 101, 1009, 9973]), st.integers(1, 10**4),
       st.integers(0, 10**4), st.integers(0, 10**4))
@settings(max_examples=150)
def test_brent_matches_naive(p, a, c, m):
    if a % p == 0:
        a = 1
    f = QuadMap(FieldContext(p), a, c)
    assert tuple(orbit_shape(f, m)) == naive_shape(f, m % p)


def test_brent_on_plain_function():
    # 0 -> 1 -> ... -> 9 -> 4
    assert brent_cycle(lambda x: x + 1 if x < 9 else 4, 0) == (4, 6)


def test_squaring_prediction_examples():
    assert squaring_cycle_length_prediction(11, 3) == 4
    assert squaring_cycle_length_prediction(7, 2) == 2
    assert squaring_cycle_length_prediction(5, 1) == 1
    with pytest.raises(ValueError):
        squaring_cycle_length_prediction(11, 10)


@pytest.mark.parametrize("p", [11, 23, 101, 1009])
def test_squaring_prediction_agrees_with_orbits(p):
    f = QuadMap(FieldContext(p), 1, 0)
    for m in range(1, p):
        try:
            pred = squaring_cycle_length_prediction(p, m)
        except ValueError:
            continue
        assert orbit_shape(f, m) == (0, pred)


def test_cubic_cycle_examples():
    F = FieldContext(5)
    assert [permutation_cycle_length(CubicMap(F, c)) for c in range(1, 5)] == [4, 2, 2, 4]


@pytest.mark.parametrize("p", [5, 11, 101, 1013])
def test_vectorised_lengths_match_scalar(p):
    F = FieldContext(p)
    cs = np.arange(1, p)
    expected = [permutation_cycle_length(CubicMap(F, int(c))) for c in cs]
    assert cycle_lengths_from_zero(p, cs).tolist() == expected


def test_critical_orbit_examples():
    for p in (7, 101):
        assert critical_orbit_distinct(QuadMap(FieldContext(p), 1, 0), 3) == (False, (0, 1))
        assert first_recurrence(QuadMap(FieldContext(p), 1, 0)) == (0, 1)
    assert critical_orbit_distinct(QuadMap(FieldContext(7), 1, -2), 3) == (False, (2, 3))
    f = QuadMap(FieldContext(5), 1, 1)
    assert critical_orbit_distinct(f, 2) == (True, None)
    assert critical_orbit_distinct(f, 3) == (False, (0, 3))
    assert first_recurrence(f) == (0, 3)
    assert critical_orbit(f, 4) == [0, 1, 2, 0, 1]


@given(st.sampled_from([101, 1009, 10007]), st.integers(1, 10**5), st.integers(0, 10**5))
@settings(max_examples=60)
def test_first_recurrence_is_minimal(p, a, c):
    if a % p == 0:
        a = 1
    f = QuadMap(FieldContext(p), a, c)
    i, j = first_recurrence(f)
    orbit = critical_orbit(f, j)
    assert j <= p and orbit[i] == orbit[j]
    assert len(set(orbit[:j])) == j
