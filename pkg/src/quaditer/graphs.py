"""Weighted complete graphs recording which factor of f^r(X) - f^r(Y) vanishes.

A (D,k)-graph has k vertices and edge weights in {-1, 0, ..., D}.  It is
*proper* when every triangle, with its weights sorted, is either all -1 or
has a strict minimum below a tied pair.  Proper (r-1,k)-graphs index the
curves making up the solution set of f^r(x_1) = ... = f^r(x_k), so
``count_proper(r-1, k) == curve_count(r, k)``.

Vertices are 0-based throughout.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, permutations, product
from typing import Iterable, Iterator, Optional, Sequence

import numpy as np

from .field import QuadMap, _residue

__all__ = [
    "EnumerationBudgetExceeded",
    "ClosureIncomplete",
    "WeightedCompleteGraph",
    "PartialGraph",
    "ChainGraph",
    "pair_index",
    "is_proper",
    "proper_mask",
    "count_proper",
    "enumerate_proper",
    "split_partition",
    "build_chain",
    "closure",
    "solution_graph",
    "fibre_solution_graphs",
]

DEFAULT_BUDGET = 1 << 24


class EnumerationBudgetExceeded(RuntimeError):
    pass


def pair_index(i: int, j: int, k: int) -> int:
    """Position of edge {i, j} in the lexicographic list of pairs of range(k)."""
    if i > j:
        i, j = j, i
    if i == j:
        raise ValueError("no edge from a vertex to itself")
    return i * (2 * k - i - 1) // 2 + (j - i - 1)


@dataclass(frozen=True)
class WeightedCompleteGraph:
    """Complete (D,k)-graph; ``weights`` lists d(i,j) for i < j lexicographically."""

    k: int
    D: int
    weights: tuple[int, ...]

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if self.D < -1:
            raise ValueError("D must be >= -1")
        object.__setattr__(self, "weights", tuple(int(w) for w in self.weights))
        if len(self.weights) != self.k * (self.k - 1) // 2:
            raise ValueError("wrong number of edge weights")
        if any(w < -1 or w > self.D for w in self.weights):
            raise ValueError(f"weights must lie in [-1, {self.D}]")

    @classmethod
    def from_function(cls, k: int, D: int, d) -> "WeightedCompleteGraph":
        return cls(k, D, tuple(d(i, j) for i, j in combinations(range(k), 2)))

    @classmethod
    def from_matrix(cls, mat: Sequence[Sequence[int]], D: int) -> "WeightedCompleteGraph":
        k = len(mat)
        for i, j in combinations(range(k), 2):
            if mat[i][j] != mat[j][i]:
                raise ValueError("weight matrix is not symmetric")
        return cls.from_function(k, D, lambda i, j: mat[i][j])

    def d(self, i: int, j: int) -> int:
        return self.weights[pair_index(i, j, self.k)]

    def edges(self) -> Iterator[tuple[int, int, int]]:
        for (i, j), w in zip(combinations(range(self.k), 2), self.weights):
            yield i, j, w

    @property
    def max_weight(self) -> int:
        return max(self.weights, default=-1)

    @property
    def strict(self) -> bool:
        return self.D in self.weights

    def matrix(self) -> list[list[int]]:
        """Symmetric weight matrix with -1 on the diagonal (for serialisation)."""
        mat = [[-1] * self.k for _ in range(self.k)]
        for i, j, w in self.edges():
            mat[i][j] = mat[j][i] = w
        return mat

    def restrict(self, verts: Sequence[int], D: Optional[int] = None) -> "WeightedCompleteGraph":
        verts = list(verts)
        return WeightedCompleteGraph.from_function(
            len(verts), self.D if D is None else D, lambda a, b: self.d(verts[a], verts[b])
        )


def _triple_ok(x: int, y: int, z: int) -> bool:
    lo, mid, hi = sorted((x, y, z))
    return hi == -1 or (lo < mid == hi)


def is_proper(G: WeightedCompleteGraph) -> bool:
    for a, b, c in combinations(range(G.k), 3):
        if not _triple_ok(G.d(a, b), G.d(a, c), G.d(b, c)):
            return False
    return True


def proper_mask(weights: np.ndarray, k: int) -> np.ndarray:
    """Vectorised properness test; ``weights`` has one graph per row."""
    weights = np.asarray(weights)
    ok = np.ones(weights.shape[0], dtype=bool)
    for a, b, c in combinations(range(k), 3):
        tri = np.sort(
            weights[:, [pair_index(a, b, k), pair_index(a, c, k), pair_index(b, c, k)]], axis=1
        )
        ok &= (tri[:, 2] == -1) | ((tri[:, 0] < tri[:, 1]) & (tri[:, 1] == tri[:, 2]))
    return ok


def _decode(start: int, stop: int, base: int, n_edges: int) -> np.ndarray:
    idx = np.arange(start, stop, dtype=np.int64)
    out = np.empty((idx.size, n_edges), dtype=np.int8)
    for e in range(n_edges):
        out[:, e] = idx % base
        idx //= base
    return out - 1


def _count_chunk(args) -> int:
    start, stop, base, n_edges, k = args
    return int(np.count_nonzero(proper_mask(_decode(start, stop, base, n_edges), k)))


def count_proper(
    D: int, k: int, *, budget: int = DEFAULT_BUDGET, chunk: int = 1 << 18, workers: int = 1
) -> int:
    """Exhaustively count proper complete (D,k)-graphs.

    Every one of the (D+2)^(k(k-1)/2) weight assignments is tested.  Chunks
    can be spread over worker processes; the sum does not depend on how.
    """
    if D < -1 or k < 1:
        raise ValueError("need D >= -1 and k >= 1")
    n_edges = k * (k - 1) // 2
    base = D + 2
    total = base**n_edges
    if total > budget:
        raise EnumerationBudgetExceeded(f"{total} assignments exceed the budget {budget}")
    if k < 3:
        return total
    jobs = [(s, min(s + chunk, total), base, n_edges, k) for s in range(0, total, chunk)]
    if workers > 1 and len(jobs) > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(workers) as pool:
            return sum(pool.map(_count_chunk, jobs))
    return sum(map(_count_chunk, jobs))


def enumerate_proper(D: int, k: int) -> list[WeightedCompleteGraph]:
    """All proper complete (D,k)-graphs, by backtracking over edges in lex order."""
    pairs = list(combinations(range(k), 2))
    # triangles completed by assigning edge (b, c): those (a, b, c) with a < b
    closing = [[(pair_index(a, b, k), pair_index(a, c, k)) for a in range(b)] for b, c in pairs]
    w = [0] * len(pairs)
    out: list[WeightedCompleteGraph] = []

    def rec(e: int):
        if e == len(pairs):
            out.append(WeightedCompleteGraph(k, D, tuple(w)))
            return
        for val in range(-1, D + 1):
            w[e] = val
            if all(_triple_ok(w[ab], w[ac], val) for ab, ac in closing[e]):
                rec(e + 1)

    rec(0)
    return out


def _split(G: WeightedCompleteGraph, verts: Sequence[int], top: int):
    i0, j0 = next((i, j) for i, j in combinations(verts, 2) if G.d(i, j) == top)
    A = [v for v in verts if v == i0 or (v != j0 and G.d(v, j0) == top)]
    B = [v for v in verts if v == j0 or (v != i0 and G.d(v, i0) == top)]
    return A, B


def split_partition(G: WeightedCompleteGraph) -> tuple[frozenset, frozenset]:
    """The unique partition A | B with all cross weights D and inner weights < D.

    Built as in the existence argument: fix an edge (i0, j0) of weight D, take
    A = {i : d(i, j0) = D} and B = {j : d(j, i0) = D}.
    """
    if G.D < 0 or G.k < 2:
        raise ValueError("split needs D >= 0 and k >= 2")
    if not G.strict:
        raise ValueError("graph is not strict: no edge has weight D")
    if not is_proper(G):
        raise ValueError("graph is not proper")
    A, B = _split(G, range(G.k), G.D)
    if set(A) & set(B) or len(A) + len(B) != G.k:
        raise RuntimeError("split construction did not partition the vertices")
    for a in A:
        for b in B:
            if G.d(a, b) != G.D:
                raise RuntimeError("cross edge below D")
    for part in (A, B):
        if any(G.d(x, y) >= G.D for x, y in combinations(part, 2)):
            raise RuntimeError("internal edge reaches D")
    return frozenset(A), frozenset(B)


@dataclass(frozen=True)
class ChainGraph:
    """Path through ``order`` with ``weights[s]`` on edge (order[s], order[s+1])."""

    order: tuple[int, ...]
    weights: tuple[int, ...]

    def __post_init__(self):
        if len(self.weights) != max(len(self.order) - 1, 0):
            raise ValueError("a chain on k vertices has k-1 edges")
        if sorted(self.order) != list(range(len(self.order))):
            raise ValueError("order must be a permutation of range(k)")

    @property
    def k(self) -> int:
        return len(self.order)

    def edges(self) -> list[tuple[int, int, int]]:
        return [
            (self.order[s], self.order[s + 1], w) for s, w in enumerate(self.weights)
        ]

    def is_chain(self) -> bool:
        """Every window of >= 2 consecutive edges has max -1 or a unique argmax."""
        w = self.weights
        for s in range(len(w)):
            top, hits = w[s], 1
            for t in range(s + 1, len(w)):
                if w[t] > top:
                    top, hits = w[t], 1
                elif w[t] == top:
                    hits += 1
                if top != -1 and hits > 1:
                    return False
        return True

    def as_partial(self, D: int) -> "PartialGraph":
        return PartialGraph(self.k, D, {_key(i, j): w for i, j, w in self.edges()})


def _chain_of(G: WeightedCompleteGraph, verts: list[int]) -> tuple[list[int], list[int]]:
    if len(verts) == 1:
        return verts, []
    top = max(G.d(i, j) for i, j in combinations(verts, 2))
    if top == -1:
        return sorted(verts), [-1] * (len(verts) - 1)
    A, B = _split(G, verts, top)
    order_a, w_a = _chain_of(G, A)
    order_b, w_b = _chain_of(G, B)
    return order_a + order_b, w_a + [top] + w_b


def build_chain(G: WeightedCompleteGraph) -> ChainGraph:
    """A chain subgraph of a proper G that generates G under :func:`closure`.

    Recursively splits at the top weight and concatenates the chain of A,
    the bridging edge of top weight, and the chain of B.
    """
    if not is_proper(G):
        raise ValueError("graph is not proper")
    order, weights = _chain_of(G, list(range(G.k)))
    return ChainGraph(tuple(order), tuple(weights))


def _key(i: int, j: int) -> tuple[int, int]:
    return (i, j) if i < j else (j, i)


@dataclass
class PartialGraph:
    """k vertices with some weighted edges, keyed by (i, j), i < j."""

    k: int
    D: int
    edges: dict = field(default_factory=dict)

    def __post_init__(self):
        self.edges = {_key(i, j): int(w) for (i, j), w in self.edges.items()}
        if any(w < -1 or w > self.D for w in self.edges.values()):
            raise ValueError(f"weights must lie in [-1, {self.D}]")

    @property
    def complete(self) -> bool:
        return len(self.edges) == self.k * (self.k - 1) // 2

    def to_complete(self) -> WeightedCompleteGraph:
        if not self.complete:
            raise ValueError("graph is missing edges")
        return WeightedCompleteGraph.from_function(self.k, self.D, lambda i, j: self.edges[(i, j)])


class ClosureIncomplete(RuntimeError):
    def __init__(self, partial: PartialGraph):
        missing = [
            (i, j) for i, j in combinations(range(partial.k), 2) if (i, j) not in partial.edges
        ]
        super().__init__(f"closure stopped with {len(missing)} missing edges: {missing}")
        self.partial = partial


def _applicable(edges: dict, k: int) -> Iterator[tuple[tuple[int, int], int]]:
    for a, b, c in permutations(range(k), 3):
        ac = _key(a, c)
        if ac in edges:
            continue
        ab, bc = edges.get(_key(a, b)), edges.get(_key(b, c))
        if ab is None or bc is None:
            continue
        if (ab == -1 and bc == -1) or ab < bc:
            yield ac, bc


def _greedy_closure(edges: dict, k: int) -> dict:
    edges = dict(edges)
    progress = True
    while progress:
        progress = False
        for ac, w in _applicable(edges, k):
            if ac not in edges:
                edges[ac] = w
                progress = True
    return edges


def _search_closure(edges: dict, k: int) -> Optional[dict]:
    target = k * (k - 1) // 2
    seen = set()
    stack = [edges]
    while stack:
        cur = stack.pop()
        if len(cur) == target:
            return cur
        state = frozenset(cur.items())
        if state in seen:
            continue
        seen.add(state)
        for ac, w in _applicable(cur, k):
            nxt = dict(cur)
            nxt[ac] = w
            stack.append(nxt)
    return None


def closure(G0: PartialGraph) -> WeightedCompleteGraph:
    """Complete G0 by repeatedly adding ac with d(a,c) = d(b,c).

    The rule fires for edges ab, bc present and ac absent when
    d(a,b) = d(b,c) = -1 or d(a,b) < d(b,c).  Triples are scanned in
    lexicographic order; should that stall short of a complete graph, every
    order of rule applications is searched before giving up.
    """
    edges = _greedy_closure(G0.edges, G0.k)
    if len(edges) < G0.k * (G0.k - 1) // 2:
        found = _search_closure(G0.edges, G0.k)
        if found is None:
            raise ClosureIncomplete(PartialGraph(G0.k, G0.D, edges))
        edges = found
    return PartialGraph(G0.k, G0.D, edges).to_complete()


def _pair_weight(iters: Sequence[Sequence[int]], i: int, j: int, p: int, r: int) -> int:
    if iters[i][0] == iters[j][0]:
        return -1
    for d in range(r):
        if (iters[i][d] + iters[j][d]) % p == 0:
            return d
    raise ArithmeticError("no vanishing factor; inputs are not on a common fibre")


def solution_graph(f: QuadMap, xs: Iterable, r: int) -> WeightedCompleteGraph:
    """Graph of a solution of f^r(x_1) = ... = f^r(x_k).

    d(i,j) is the least d in {-1, ..., r-1} with phi(x_i, x_j; d) = 0.  The
    result is always proper; that is checked before returning.
    """
    xs = [_residue(f, x) for x in xs]
    if not xs:
        raise ValueError("need at least one point")
    iters = []
    for x in xs:
        seq = [x]
        for _ in range(r):
            seq.append(f(seq[-1]))
        iters.append(seq)
    if len({seq[r] for seq in iters}) != 1:
        raise ValueError("points do not share a common value of f^r")
    k, p = len(xs), f.ctx.p
    G = WeightedCompleteGraph.from_function(
        k, r - 1, lambda i, j: _pair_weight(iters, i, j, p, r)
    )
    if not is_proper(G):
        raise RuntimeError(f"solution graph {G} is not proper")
    return G


def fibre_solution_graphs(
    f: QuadMap, r: int, k: int
) -> Iterator[tuple[tuple[int, ...], WeightedCompleteGraph]]:
    """Every ordered k-tuple on a common fibre of f^r, with its graph.

    Uses precomputed iterate tables, so it is much faster than calling
    :func:`solution_graph` per tuple; graphs are not checked for properness.
    """
    p = f.ctx.p
    table = [f.ctx.elements()]
    for _ in range(r):
        table.append(f.apply_array(table[-1]))
    cols = [t.tolist() for t in table]
    order = np.argsort(table[r], kind="stable")
    values = table[r][order]
    bounds = np.flatnonzero(np.diff(values)) + 1
    pairs = list(combinations(range(k), 2))
    for fibre in np.split(order, bounds):
        fibre = fibre.tolist()
        for tup in product(fibre, repeat=k):
            weights = []
            for i, j in pairs:
                x, y = tup[i], tup[j]
                if x == y:
                    weights.append(-1)
                    continue
                for d in range(r):
                    if (cols[d][x] + cols[d][y]) % p == 0:
                        weights.append(d)
                        break
                else:
                    raise ArithmeticError("no vanishing factor on a common fibre")
            yield tup, WeightedCompleteGraph(k, r - 1, tuple(weights))
