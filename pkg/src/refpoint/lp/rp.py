"""Reference point problems over polyhedra as linear programs."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from ..core import (
    DimensionError,
    NormKind,
    ObjectiveVector,
    ReferenceContext,
    Sense,
    as_fraction,
    format_rational,
    ref_objective,
)
from ..reductions import ApproxParetoSet, RPApproxSolver, epsilon_pareto_via_gap, gap_via_rp_inf
from .simplex import Polyhedron, simplex_solve


def _matrix(C) -> tuple:
    return tuple(tuple(as_fraction(v) for v in row) for row in C)


def image(C, x) -> ObjectiveVector:
    return ObjectiveVector(sum(a * b for a, b in zip(row, x)) for row in C)


@dataclass(frozen=True)
class RPProgram:
    """``min r(Cx)`` over a polyhedron for the infinity or a cornered norm.

    The linear program has one extra free variable ``Delta``::

        min  Delta + (1/p) sum_i lambda_i c_i x
        s.t. lambda_i (c_i x - y^r_i) <= Delta   for every i,  x in P.
    """

    poly: Polyhedron
    C: tuple
    ctx: ReferenceContext

    def __post_init__(self):
        object.__setattr__(self, "C", _matrix(self.C))
        if any(len(row) != self.poly.n for row in self.C):
            raise DimensionError("cost matrix columns do not match the variable count")
        if len(self.C) != self.ctx.k:
            raise DimensionError("cost matrix rows do not match the criterion count")
        if any(v < 0 for row in self.C for v in row):
            raise ValueError("cost matrix must be nonnegative")
        norm = self.ctx.norm
        if norm.kind is NormKind.LP:
            raise ValueError("only the infinity and cornered norms are linear-programmable here")
        if self.ctx.sense is not Sense.MIN:
            raise ValueError("RPProgram is the minimization problem")

    @property
    def k(self) -> int:
        return len(self.C)

    @property
    def inv_p(self) -> Fraction:
        p = self.ctx.norm.p
        return Fraction(0) if p is None else 1 / p

    def linear_program(self) -> tuple[Polyhedron, list]:
        n = self.poly.n
        lam = self.ctx.norm.weights
        yr = self.ctx.refpoint
        rows = []
        for i in range(self.k):
            a = tuple(lam[i] * c for c in self.C[i]) + (-1,)
            rows.append((a, "<=", lam[i] * yr[i]))
        ext = self.poly.extend(1, rows, (False,))
        obj = [self.inv_p * sum(lam[i] * self.C[i][j] for i in range(self.k)) for j in range(n)] + [1]
        return ext, obj


@dataclass(frozen=True)
class RPLPResult:
    x: tuple
    point: ObjectiveVector
    delta: Fraction
    value: Fraction
    lp_value: Fraction
    pivots: int = 0

    def to_json(self) -> dict:
        return {
            "x": [format_rational(v) for v in self.x],
            "objective_vector": self.point.to_json(),
            "delta": format_rational(self.delta),
            "r_value": format_rational(self.value),
            "r_decimal": float(self.value),
        }


def rp_lp_solve(prog: RPProgram) -> RPLPResult:
    """Exact minimizer of ``r(Cx)`` over the polyhedron.

    The reported value is ``||y^r|| + Delta + (1/p) sum lambda_i (c_i x - y^r_i)``,
    which equals ``r(Cx)`` whenever ``Cx >= y^r`` (always the case for a
    feasible reference point).
    """
    ext, obj = prog.linear_program()
    res = simplex_solve(ext, obj)
    if res.status == "infeasible":
        raise ValueError("the polyhedron is empty")
    if res.status == "unbounded":
        raise ValueError("the reference point program is unbounded")
    x = res.x[:-1]
    delta = res.x[-1]
    point = image(prog.C, x)
    lam = prog.ctx.norm.weights
    yr = prog.ctx.refpoint
    base = prog.ctx.norm(yr).const
    value = base + delta + prog.inv_p * sum(l * (a - b) for l, a, b in zip(lam, point, yr))
    return RPLPResult(tuple(x), point, delta, value, res.value, res.pivots)


def lp_ideal_point(poly: Polyhedron, C) -> ObjectiveVector:
    C = _matrix(C)
    coords = []
    for row in C:
        res = simplex_solve(poly, row)
        if not res.optimal:
            raise ValueError(f"criterion minimum is {res.status}")
        coords.append(res.value)
    return ObjectiveVector(coords)


def lp_upper_bound(poly: Polyhedron, C) -> Fraction:
    """Largest value any criterion attains over the polyhedron."""
    top = Fraction(0)
    for row in _matrix(C):
        res = simplex_solve(poly, row, "max")
        if not res.optimal:
            raise ValueError(f"criterion maximum is {res.status}; pass an explicit bound")
        top = max(top, res.value)
    return top


# ---------------------------------------------------------------------------
# two-variable oracles (independent of the simplex code)


def _lines(poly: Polyhedron):
    for a, _, b in poly.rows:
        yield a, b
    for j, flag in enumerate(poly.nonneg):
        if flag:
            yield tuple(Fraction(int(i == j)) for i in range(poly.n)), Fraction(0)


def _intersect(l1, l2):
    (a1, b1), (a2, b2) = l1, l2
    det = a1[0] * a2[1] - a1[1] * a2[0]
    if det == 0:
        return None
    return ((b1 * a2[1] - b2 * a1[1]) / det, (a1[0] * b2 - a2[0] * b1) / det)


def polygon_vertices(poly: Polyhedron) -> list[tuple]:
    """Vertices of a 2-variable polyhedron by intersecting all pairs of boundary lines."""
    if poly.n != 2:
        raise DimensionError("vertex enumeration here is for two variables")
    lines = list(_lines(poly))
    pts = set()
    for l1, l2 in itertools.combinations(lines, 2):
        p = _intersect(l1, l2)
        if p is not None and poly.contains(p):
            pts.add(p)
    return sorted(pts)


def rp_vertex_oracle(prog: RPProgram) -> tuple[tuple, Fraction] | None:
    """Minimum of ``r(Cx)`` over a bounded 2-variable polyhedron.

    ``r(Cx)`` is convex and piecewise linear, so its minimum sits at a vertex
    of the arrangement formed by the boundary lines and the breakpoint lines
    ``lambda_i (c_i x - y^r_i) = lambda_j (c_j x - y^r_j)``.
    """
    poly = prog.poly
    if poly.n != 2:
        raise DimensionError("vertex enumeration here is for two variables")
    lam = prog.ctx.norm.weights
    yr = prog.ctx.refpoint
    lines = list(_lines(poly))
    for i, j in itertools.combinations(range(prog.k), 2):
        a = tuple(lam[i] * prog.C[i][t] - lam[j] * prog.C[j][t] for t in range(2))
        b = lam[i] * yr[i] - lam[j] * yr[j]
        if any(a):
            lines.append((a, b))
    best = None
    for l1, l2 in itertools.combinations(lines, 2):
        p = _intersect(l1, l2)
        if p is None or not poly.contains(p):
            continue
        v = ref_objective(prog.ctx, image(prog.C, p)).const
        if best is None or v < best[1]:
            best = (p, v)
    return best


def polygon_pareto_frontier(poly: Polyhedron, C) -> list[tuple]:
    """Vertices of the Pareto frontier of ``{Cx : x in poly}`` for two criteria, left to right.

    The image is a convex polygon; its Pareto frontier is the part of the
    lower hull between the leftmost-lowest and the lowest-leftmost vertex.
    """
    C = _matrix(C)
    if len(C) != 2:
        raise DimensionError("frontier construction is for two criteria")
    pts = sorted({tuple(image(C, v)) for v in polygon_vertices(poly)})
    if not pts:
        return []

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower: list = []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    frontier = [lower[0]]
    for p in lower[1:]:
        if p[1] < frontier[-1][1]:
            frontier.append(p)
        else:
            break
    return [ObjectiveVector(p) for p in frontier]


def sample_frontier(frontier: Sequence, per_edge: int = 16) -> list[ObjectiveVector]:
    out = [ObjectiveVector(frontier[0])]
    for a, b in zip(frontier, frontier[1:]):
        for s in range(1, per_edge + 1):
            t = Fraction(s, per_edge)
            out.append(ObjectiveVector((1 - t) * u + t * v for u, v in zip(a, b)))
    return out


# ---------------------------------------------------------------------------
# Pareto set approximation for linear programs


class LPHandle:
    """Polyhedron with a linear objective map; remembers the preimage of each returned point."""

    def __init__(self, poly: Polyhedron, C):
        self.poly = poly
        self.C = _matrix(C)
        self.k = len(self.C)
        self.preimage: dict = {}


def lp_rp_solver() -> RPApproxSolver:
    """Exact RP solver over an :class:`LPHandle`."""

    def solve(handle: LPHandle, ctx: ReferenceContext) -> ObjectiveVector:
        res = rp_lp_solve(RPProgram(handle.poly, handle.C, ctx))
        handle.preimage.setdefault(res.point, res.x)
        return res.point

    return RPApproxSolver(solve, 1)


def fptas_pareto_lp(poly: Polyhedron, C, eps, positivity, *, bound=None) -> ApproxParetoSet:
    """``(1 + eps)^2``-approximate Pareto set of ``{Cx : x in poly}``.

    ``positivity`` is a lower bound on every attainable objective value; it
    must be positive.  Gap queries go through the exact LP reference point
    solver with the ideal point as reference point, on the geometric grid
    with ratio ``1 + eps``.
    """
    eps = as_fraction(eps)
    positivity = as_fraction(positivity)
    if eps <= 0 or positivity <= 0:
        raise ValueError("eps and the positivity bound must be positive")
    handle = LPHandle(poly, C)
    ideal = lp_ideal_point(poly, handle.C)
    if any(v < positivity for v in ideal):
        raise ValueError(f"objective values below the positivity bound {positivity}: ideal point {ideal}")
    top = as_fraction(bound) if bound is not None else lp_upper_bound(poly, handle.C)
    alpha = 1 + eps
    solver = lp_rp_solver()

    def gap(y):
        return gap_via_rp_inf(handle, y, alpha, lambda _h: ideal, solver, integral=False)

    result = epsilon_pareto_via_gap(gap, alpha, k=handle.k, bound=top, lower=positivity, include_zero=False)
    prov = {p: {"grid": result.provenance[p], "x": [format_rational(v) for v in handle.preimage[p]]}
            for p in result.points}
    return ApproxParetoSet(result.alpha, result.points, prov)
