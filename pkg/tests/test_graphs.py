from itertools import combinations, product

import numpy as np
import pytest

from quaditer.field import FieldContext, QuadMap, phi_eval
from quaditer.graphs import (
    ChainGraph,
    ClosureIncomplete,
    EnumerationBudgetExceeded,
    PartialGraph,
    WeightedCompleteGraph,
    build_chain,
    closure,
    count_proper,
    enumerate_proper,
    fibre_solution_graphs,
    is_proper,
    proper_mask,
    solution_graph,
    split_partition,
)
from quaditer.exact import curve_count


def G3(d01, d02, d12, D=0):
    return WeightedCompleteGraph(3, D, (d01, d02, d12))


def brute_proper(G):
    for a, b, c in combinations(range(G.k), 3):
        ws = sorted((G.d(a, b), G.d(a, c), G.d(b, c)))
        if not (ws == [-1, -1, -1] or ws[0] < ws[1] == ws[2]):
            return False
    return True


def all_splits(G):
    found = []
    for mask in range(1, 2 ** (G.k - 1)):
        A = {v for v in range(G.k) if mask >> v & 1}
        B = set(range(G.k)) - A
        cross = all(G.d(a, b) == G.D for a in A for b in B)
        inner = all(G.d(x, y) < G.D for part in (A, B) for x, y in combinations(part, 2))
        if cross and inner:
            found.append(frozenset(map(frozenset, (A, B))))
    return found


def chain_ok(weights):
    for s in range(len(weights)):
        for t in range(s + 2, len(weights) + 1):
            window = weights[s:t]
            top = max(window)
            if top != -1 and window.count(top) > 1:
                return False
    return True


def test_properness_examples():
    assert is_proper(G3(-1, -1, -1))
    assert is_proper(G3(-1, 0, 0))
    assert not is_proper(G3(0, 0, 0))


def test_proper_mask_matches_scalar():
    k, D = 4, 1
    rows = np.array(list(product(range(-1, D + 1), repeat=6)))
    mask = proper_mask(rows, k)
    assert mask.tolist() == [brute_proper(WeightedCompleteGraph(k, D, r)) for r in rows]


def test_count_examples():
    for k in range(1, 6):
        assert count_proper(-1, k) == 1
    assert count_proper(0, 2) == 2
    assert count_proper(1, 2) == 3
    assert count_proper(0, 3) == 4


@pytest.mark.parametrize("D, k", [(0, 4), (1, 4), (2, 4), (0, 5), (1, 5)])
def test_count_matches_curve_count(D, k):
    assert count_proper(D, k) == curve_count(D + 1, k)


@pytest.mark.parametrize("D, k", [(0, 4), (1, 4), (2, 3), (1, 5)])
def test_enumeration_agrees_with_count(D, k):
    graphs = enumerate_proper(D, k)
    assert len(graphs) == count_proper(D, k)
    assert len(set(graphs)) == len(graphs)
    assert all(brute_proper(G) for G in graphs)


def test_count_budget():
    with pytest.raises(EnumerationBudgetExceeded):
        count_proper(3, 6, budget=10**6)


def test_parallel_count_is_identical():
    assert count_proper(2, 5, workers=2, chunk=1 << 16) == count_proper(2, 5)


def test_split_examples():
    fs = frozenset
    assert set(split_partition(WeightedCompleteGraph(2, 0, (0,)))) == {fs({0}), fs({1})}
    assert set(split_partition(G3(-1, 0, 0))) == {fs({0, 1}), fs({2})}
    G = WeightedCompleteGraph.from_function(
        4, 1, lambda i, j: 1 if (i < 2) != (j < 2) else 0)
    assert set(split_partition(G)) == {fs({0, 1}), fs({2, 3})}


def test_split_refuses():
    with pytest.raises(ValueError):
        split_partition(G3(-1, -1, -1))
    with pytest.raises(ValueError):
        split_partition(G3(0, 0, 0))


def test_chain_examples():
    assert build_chain(WeightedCompleteGraph(2, 0, (0,))).edges() == [(0, 1, 0)]
    ch = build_chain(WeightedCompleteGraph(4, 2, (-1,) * 6))
    assert ch.order == (0, 1, 2, 3) and ch.weights == (-1, -1, -1)
    ch = build_chain(G3(-1, 0, 0))
    assert ch.weights == (-1, 0) and set(ch.order[:2]) == {0, 1}


def test_chain_rejects_bad_order():
    with pytest.raises(ValueError):
        ChainGraph((0, 0, 1), (-1, -1))


def test_closure_examples():
    ch = ChainGraph((0, 1, 2, 3), (-1, -1, -1))
    assert closure(ch.as_partial(1)) == WeightedCompleteGraph(4, 1, (-1,) * 6)
    assert closure(ChainGraph((0, 1, 2), (-1, 0)).as_partial(0)) == G3(-1, 0, 0)


def test_closure_can_stall():
    with pytest.raises(ClosureIncomplete):
        closure(PartialGraph(4, 1, {(0, 1): 0, (2, 3): 0}))


@pytest.mark.parametrize("D, k", [(D, k) for D in range(3) for k in range(2, 5)])
def test_chain_machinery_exhaustive(D, k):
    for G in enumerate_proper(D, k):
        if G.strict:
            splits = all_splits(G)
            assert len(splits) == 1
            assert frozenset(split_partition(G)) == splits[0]
        ch = build_chain(G)
        assert chain_ok(list(ch.weights)) and ch.is_chain()
        assert all(G.d(i, j) == w for i, j, w in ch.edges())
        assert closure(ch.as_partial(D)) == G


def test_solution_graph_examples():
    f = QuadMap(FieldContext(13), 1, 1)
    assert solution_graph(f, [1, 12], 2).weights == (0,)
    assert solution_graph(f, [1, 6], 2).weights == (1,)
    assert solution_graph(f, [4, 4, 4], 2).weights == (-1, -1, -1)
    with pytest.raises(ValueError):
        solution_graph(f, [1, 2], 2)


def minimal_d(f, x, y, r):
    for d in range(-1, r):
        if int(phi_eval(f, x, y, d)) == 0:
            return d
    raise AssertionError("no vanishing factor")


@pytest.mark.parametrize("c", [1, 3, 7])
def test_fibre_graphs_match_oracle(c):
    f = QuadMap(FieldContext(101), 2, c)
    r = 3
    for tup, G in fibre_solution_graphs(f, r, 3):
        assert is_proper(G)
        for i, j in combinations(range(3), 2):
            assert G.d(i, j) == minimal_d(f, tup[i], tup[j], r)
    count = sum(1 for _ in fibre_solution_graphs(f, r, 2))
    assert count == sum(v * v for v in np.bincount([f(f(f(x))) for x in range(101)]))
