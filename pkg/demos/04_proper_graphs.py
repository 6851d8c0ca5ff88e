"""Proper weighted graphs, splits, chains and closure.

Weights live in {-1, ..., D}.  In a proper graph every triangle is either
all -1 or has a strict minimum below a tied pair.  Counting them gives the
curve counts again.
"""
from quaditer import (
    FieldContext,
    QuadMap,
    WeightedCompleteGraph,
    build_chain,
    closure,
    count_proper,
    curve_count,
    solution_graph,
    split_partition,
)
from quaditer.graphs import enumerate_proper

# %% counting
for D in range(3):
    print(D, [count_proper(D, k) for k in range(1, 6)], [curve_count(D + 1, k) for k in range(1, 6)])

# %% all proper graphs on 3 vertices with D = 0
for G in enumerate_proper(0, 3):
    print(G.weights)

# %% split a strict graph
G = WeightedCompleteGraph.from_function(4, 1, lambda i, j: 1 if (i < 2) != (j < 2) else 0)
print(G.matrix())
print("split:", split_partition(G))

# %% a chain generates its graph
ch = build_chain(G)
print("chain:", ch.edges())
print("closure recovers G:", closure(ch.as_partial(G.D)) == G)

# %% graphs from actual solutions of f^r(x) = f^r(y)
f = QuadMap(FieldContext(13), 1, 1)
print(solution_graph(f, [1, 12], 2).weights, solution_graph(f, [1, 6], 2).weights)
