"""Reference point methods, compromise programming and Pareto set approximation."""
from .core import (
    DimensionError,
    InfeasibleReferencePoint,
    Norm,
    NormKind,
    NormValue,
    NoneAbove,
    NoneBelow,
    ObjectiveVector,
    Order,
    ReferenceContext,
    Sense,
    Witness,
    compare_norm,
    dominates,
    eval_norm,
    pareto_filter,
    ref_objective,
    vec,
)
from .explicit import (
    ExactGapOracle,
    ExplicitInstance,
    brute_cp_optimum,
    brute_rp_optimum,
    brute_weighted_sum,
    exact_pareto_set,
    gap_oracle_exact,
    ideal_point,
    is_feasible_refpoint,
)

__version__ = "0.1.0"

__all__ = [
    "DimensionError",
    "ExactGapOracle",
    "ExplicitInstance",
    "InfeasibleReferencePoint",
    "NoneAbove",
    "NoneBelow",
    "Norm",
    "NormKind",
    "NormValue",
    "ObjectiveVector",
    "Order",
    "ReferenceContext",
    "Sense",
    "Witness",
    "brute_cp_optimum",
    "brute_rp_optimum",
    "brute_weighted_sum",
    "compare_norm",
    "dominates",
    "eval_norm",
    "exact_pareto_set",
    "gap_oracle_exact",
    "ideal_point",
    "is_feasible_refpoint",
    "pareto_filter",
    "ref_objective",
    "vec",
]
