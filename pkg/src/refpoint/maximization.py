"""Maximization: objective ``||y^r|| - ||y^r - y||``, Gap, and two counterexample fixtures."""
from __future__ import annotations

from fractions import Fraction
from typing import Callable, Sequence

from .core import (
    Norm,
    NoneAbove,
    NormValue,
    ObjectiveVector,
    ReferenceContext,
    Sense,
    Witness,
    as_fraction,
    format_rational,
    leq,
    ref_objective,
)
from .explicit import ExplicitInstance, _best, brute_weighted_sum, ideal_point
from .reductions import ApproxParetoSet, ContractViolation, RPApproxSolver

__all__ = [
    "cp_counterexample",
    "cp_indistinguishability_check",
    "exact_max_rp_solver",
    "max_cp_via_pareto",
    "max_gap_via_rp",
    "max_ref_objective",
    "max_rp_via_pareto",
    "max_select_from_pareto",
    "ws_counterexample",
    "ws_counterexample_check",
]


def max_ref_objective(ctx: ReferenceContext, y: Sequence) -> NormValue:
    """``||y^r|| - ||y^r - y||``; may be negative."""
    if ctx.sense is not Sense.MAX:
        ctx = ReferenceContext(ctx.refpoint, ctx.norm, Sense.MAX, ctx.verified)
    return ref_objective(ctx, y)


def _as_max(ctx: ReferenceContext) -> ReferenceContext:
    if ctx.sense is Sense.MAX:
        return ctx
    return ReferenceContext(ctx.refpoint, ctx.norm, Sense.MAX, ctx.verified)


def max_select_from_pareto(approx_set: ApproxParetoSet | Sequence, ctx: ReferenceContext) -> ObjectiveVector:
    """Best point of an ``alpha``-approximate Pareto set (Max); within ``1/alpha`` of the optimum."""
    pts = sorted(ObjectiveVector(p) for p in (approx_set.points if isinstance(approx_set, ApproxParetoSet) else approx_set))
    if not pts:
        raise ValueError("empty approximate Pareto set")
    best, _ = _best(pts, _as_max(ctx), Sense.MAX)
    return best


def max_rp_via_pareto(approx_set, ctx: ReferenceContext) -> ObjectiveVector:
    """Reference point solution from an approximate Pareto set; factor ``alpha``."""
    return max_select_from_pareto(approx_set, ctx)


def max_cp_via_pareto(approx_set: ApproxParetoSet, norm: Norm) -> tuple[ObjectiveVector, ObjectiveVector]:
    """Compromise solution (Max) from an ``alpha``-approximate Pareto set.

    Uses the component-wise maximum of the set as reference point, which
    lies between ``ideal / alpha`` and the ideal point.  Exact for
    ``alpha = 1``.  For ``alpha > 1`` no factor is guaranteed: see
    ``tests/test_maximization.py`` for instances where the selected point
    has value 0 while the optimum is positive.  Returns ``(y^r, selected point)``.
    """
    if not approx_set.points:
        raise ValueError("empty approximate Pareto set")
    k = len(approx_set.points[0])
    yr = ObjectiveVector(max(p[i] for p in approx_set.points) for i in range(k))
    return yr, max_select_from_pareto(approx_set, ReferenceContext(yr, norm, Sense.MAX))


def brute_max_rp(inst: ExplicitInstance, ctx: ReferenceContext) -> tuple[ObjectiveVector, NormValue]:
    """Exact maximizer of ``r`` without a feasibility check on the reference point."""
    return _best(inst.points, _as_max(ctx), Sense.MAX)


def exact_max_rp_solver() -> RPApproxSolver:
    return RPApproxSolver(lambda inst, ctx: brute_max_rp(inst, ctx)[0], 1)


def max_gap_via_rp(instance, y: Sequence, alpha, rp_solver: RPApproxSolver, bound):
    """``Gap(alpha)`` for maximization through one reference point call.

    ``y^r = c y`` with ``c = max_{y_i != 0} M / y_i`` and weights ``1/y_i``
    on the nonzero coordinates (zero elsewhere), so ``r(y) = 1``.  A solution
    with ``r >= 1`` dominates ``y``; otherwise nothing reaches ``alpha * y``.
    ``rp_solver`` must guarantee ``r(y') >= max r / alpha``.
    """
    y = tuple(as_fraction(v) for v in y)
    alpha = as_fraction(alpha)
    if alpha <= 1:
        raise ValueError("alpha must exceed 1")
    if rp_solver.factor > alpha:
        raise ValueError(f"solver factor {rp_solver.factor} exceeds alpha {alpha}")
    if any(v < 0 for v in y):
        raise ValueError("Gap queries must be nonnegative")
    if all(v == 0 for v in y):
        raise ValueError("the zero query is answered by any solution; pass y != 0")
    M = as_fraction(bound)
    support = [i for i, v in enumerate(y) if v != 0]
    c = max(M / y[i] for i in support)
    yr = ObjectiveVector(c * v for v in y)
    weights = tuple(1 / v if v != 0 else Fraction(0) for v in y)
    ctx = ReferenceContext(yr, Norm.infinity(weights), Sense.MAX)
    y_prime = rp_solver(instance, ctx)
    if ref_objective(ctx, y_prime) >= ref_objective(ctx, y):
        if hasattr(instance, "__contains__") and y_prime not in instance:
            raise ContractViolation(f"solver returned {y_prime}, which is not a point of the instance")
        if not leq(y, y_prime):
            raise ContractViolation(f"Gap witness {y_prime} does not dominate the query {y}")
        return Witness(y_prime)
    return NoneAbove()


# ---------------------------------------------------------------------------
# counterexamples


def ws_counterexample() -> tuple[ExplicitInstance, ExplicitInstance]:
    """``{(1,1), (3,0), (0,3)}`` and the same set without ``(1,1)``."""
    full = ExplicitInstance([(1, 1), (3, 0), (0, 3)])
    return full, full.without((1, 1))


def _exact_ws_max(inst, weights):
    return brute_weighted_sum(inst, weights, Sense.MAX)


def ws_counterexample_check(ws_solver: Callable | None = None, grid: int = 100) -> dict:
    """Sweep ``lambda = (j/(grid-1), 1 - j/(grid-1))`` over both fixture sets.

    Reports how often ``(1,1)`` is returned and whether any output tells the
    two sets apart.  The exact check ``3 max(lambda) > lambda_1 + lambda_2``
    proves ``(1,1)`` is never a weighted-sum maximizer.
    """
    solver = ws_solver or _exact_ws_max
    full, reduced = ws_counterexample()
    target = ObjectiveVector((1, 1))
    hits = 0
    differ = 0
    dominated_strictly = 0
    rows = []
    for j in range(grid):
        lam = (Fraction(j, grid - 1), 1 - Fraction(j, grid - 1))
        a = ObjectiveVector(solver(full, lam))
        b = ObjectiveVector(solver(reduced, lam))
        hits += a == target
        differ += a != b
        if 3 * max(lam) > lam[0] + lam[1]:
            dominated_strictly += 1
        rows.append((lam, a, b))
    return {
        "grid": grid,
        "returned_11": hits,
        "distinguishing_weights": differ,
        "strict_competitor": dominated_strictly,
        "never_optimal": hits == 0 and dominated_strictly == grid,
        "rows": [
            {"lambda": [format_rational(v) for v in lam], "full": a.to_json(), "without_11": b.to_json()}
            for lam, a, b in rows
        ],
    }


def cp_counterexample(M: int, eps) -> tuple[ExplicitInstance, ExplicitInstance]:
    """The five-point set ``Y(M, eps)`` and ``Y'`` without ``(1, M+1)``."""
    eps = as_fraction(eps)
    if not 0 < eps < 1:
        raise ValueError("eps must lie in (0, 1)")
    if M < 1:
        raise ValueError("M must be positive")
    a = 1 / (1 + eps) ** 2
    pts = [(1, M + 1), (a, M + a), (1, Fraction(M, 2) + 1), (M + 1, 0), (0, 2 * M + 1)]
    full = ExplicitInstance(pts, rational=True)
    return full, full.without((1, M + 1))


def _normalized_grid(steps: int):
    """Weights with ``max(lambda) = 1``: ``(1, t)`` then ``(t, 1)`` for ``t = j/steps``."""
    seen = set()
    for j in range(steps + 1):
        t = Fraction(j, steps)
        for lam in ((Fraction(1), t), (t, Fraction(1))):
            if lam not in seen:
                seen.add(lam)
                yield lam


def cp_indistinguishability_check(M: int = 1000, eps=Fraction(1, 2), delta=None, steps: int = 60) -> dict:
    """Compare compromise values on ``Y(M, eps)`` and ``Y'`` over a weight grid.

    For each ``lambda`` (``||lambda||_inf = 1``) it reports
    ``r(y) / max_{z in Y'} r(z)`` with ``r(z) = ||ideal|| - ||ideal - z||``,
    the regime (``lambda_2 >= 2/3``: the point ``y'`` competes; ``lambda_2 <=
    2/3``: ``y''`` ties with ``y``), and the ``delta`` a ``(1+delta)``-approximate
    solver would need to be forced to reveal ``y``.
    """
    eps = as_fraction(eps)
    full, reduced = cp_counterexample(M, eps)
    a = 1 / (1 + eps) ** 2
    y = ObjectiveVector((1, M + 1))
    y1 = ObjectiveVector((a, M + a))
    y2 = ObjectiveVector((1, Fraction(M, 2) + 1))
    others = [z for z in full.points if z != y]
    required = all(not leq(tuple(v / (1 + eps) for v in y), z) for z in others)
    if not required:
        raise ValueError(f"M={M} is too small: (1, M+1) is not needed in every (1+eps)-approximate Pareto set")
    ideal = ideal_point(full, Sense.MAX)
    if ideal != ideal_point(reduced, Sense.MAX):
        raise AssertionError("the two sets must share the ideal point")
    bound = (1 - a) / (Fraction(M, 3) - Fraction(1, 3) + a)
    two_thirds = Fraction(2, 3)
    rows = []
    worst = Fraction(0)
    regime_ok = True
    for lam in _normalized_grid(steps):
        ctx = ReferenceContext(ideal, Norm.infinity(lam), Sense.MAX)
        ry = ref_objective(ctx, y).const
        best_z, best_r = _best(reduced.points, ctx, Sense.MAX)
        best_r = best_r.const
        need = max(Fraction(0), ry / best_r - 1) if best_r > 0 else None
        r1 = ref_objective(ctx, y1).const
        r2 = ref_objective(ctx, y2).const
        if lam[1] >= two_thirds:
            regime = "y'"
            d = ry / r1 - 1
            ok = 0 <= d <= bound
        else:
            regime = "y''"
            d = ry / r2 - 1
            ok = r2 == ry
        if lam[1] == two_thirds:
            ok = ok or r2 == ry
        regime_ok &= ok
        if need is None:
            worst = None
        elif worst is not None:
            worst = max(worst, need)
        rows.append({
            "lambda": [format_rational(v) for v in lam],
            "regime": regime,
            "r_y": format_rational(ry),
            "best_in_reduced": best_z.to_json(),
            "delta_needed": None if need is None else format_rational(need),
            "delta_regime_point": format_rational(d),
            "ok": ok,
        })
    out = {
        "M": M,
        "eps": format_rational(eps),
        "y_required": required,
        "ideal": ideal.to_json(),
        "analytic_bound": format_rational(bound),
        "max_delta_needed": None if worst is None else format_rational(worst),
        "regimes_hold": regime_ok,
        "rows": rows,
    }
    if delta is not None:
        delta = as_fraction(delta)
        out["delta"] = format_rational(delta)
        out["indistinguishable"] = worst is not None and worst <= delta
    return out
