"""Exact linear programming: simplex, reference point programs, covering and rounding."""
from .rounding import (
    CoveringInstance,
    RoundingResult,
    RoundingRule,
    brute_covering_rp,
    hochbaum_round,
    hochbaum_rule,
    rp_via_lp_rounding,
)
from .rp import (
    LPHandle,
    RPLPResult,
    RPProgram,
    fptas_pareto_lp,
    image,
    lp_ideal_point,
    lp_rp_solver,
    lp_upper_bound,
    polygon_pareto_frontier,
    polygon_vertices,
    rp_lp_solve,
    rp_vertex_oracle,
    sample_frontier,
)
from .simplex import INFEASIBLE, UNBOUNDED, LPResult, Optimal, Polyhedron, simplex_solve

__all__ = [
    "CoveringInstance",
    "INFEASIBLE",
    "LPHandle",
    "LPResult",
    "Optimal",
    "Polyhedron",
    "RPLPResult",
    "RPProgram",
    "RoundingResult",
    "RoundingRule",
    "UNBOUNDED",
    "brute_covering_rp",
    "fptas_pareto_lp",
    "hochbaum_round",
    "hochbaum_rule",
    "image",
    "lp_ideal_point",
    "lp_rp_solver",
    "lp_upper_bound",
    "polygon_pareto_frontier",
    "polygon_vertices",
    "rp_lp_solve",
    "rp_vertex_oracle",
    "rp_via_lp_rounding",
    "sample_frontier",
    "simplex_solve",
]
