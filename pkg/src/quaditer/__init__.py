"""Iteration of quadratic maps aX^2 + c over prime fields.

Exact image sizes and preimage moments, the limiting densities mu_r and the
curve-count recurrence behind them, proper-graph combinatorics, and the
numerical experiments (cubic cycle lengths, Pollard rho).
"""
from .exact import (
    DyadicRational,
    check_nu_bounds,
    curve_count,
    falling_coeffs,
    moment_from_weights,
    mu,
    nu,
    nu_weights,
)
from .field import (
    CubicMap,
    FieldContext,
    FieldElement,
    GeneralQuadMap,
    QuadMap,
    iterate,
    map_eval,
    phi_eval,
    verify_factorization,
)
from .graphs import (
    WeightedCompleteGraph,
    build_chain,
    closure,
    count_proper,
    is_proper,
    solution_graph,
    split_partition,
)
from .moments import (
    image_iterate,
    lemma1_deviation,
    moment,
    rho_histogram,
    zero_count_via_moments,
)
from .orbits import (
    OrbitShape,
    critical_orbit_distinct,
    first_recurrence,
    orbit_shape,
    permutation_cycle_length,
)

__version__ = "0.1.0"

__all__ = [
    "DyadicRational",
    "check_nu_bounds",
    "curve_count",
    "falling_coeffs",
    "moment_from_weights",
    "mu",
    "nu",
    "nu_weights",
    "CubicMap",
    "FieldContext",
    "FieldElement",
    "GeneralQuadMap",
    "QuadMap",
    "iterate",
    "map_eval",
    "phi_eval",
    "verify_factorization",
    "WeightedCompleteGraph",
    "build_chain",
    "closure",
    "count_proper",
    "is_proper",
    "solution_graph",
    "split_partition",
    "image_iterate",
    "lemma1_deviation",
    "moment",
    "rho_histogram",
    "zero_count_via_moments",
    "OrbitShape",
    "critical_orbit_distinct",
    "first_recurrence",
    "orbit_shape",
    "permutation_cycle_length",
]
