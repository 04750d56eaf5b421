"""Reductions between Pareto-set approximation, reference point problems and Gap.

Each function takes oracles or solvers as plain callables and composes them
into a new approximation algorithm with a stated factor:

* approximate Pareto set -> RP / CP (:func:`select_rp_from_pareto`,
  :func:`approx_cp_via_pareto`),
* approximate RP / CP solver -> Gap (:func:`gap_via_rp_inf`,
  :func:`gap_via_rp_pnorm`, :func:`gap_via_cp`),
* Gap -> approximate Pareto set (:func:`epsilon_pareto_via_gap`),
* weighted sum -> RP with the infinity norm (:func:`rp_via_weighted_sum`).
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Sequence

from .core import (
    DimensionError,
    InfeasibleReferencePoint,
    Norm,
    NormKind,
    NoneAbove,
    NoneBelow,
    ObjectiveVector,
    ReferenceContext,
    Sense,
    Witness,
    as_fraction,
    format_rational,
    leq,
    ref_objective,
)
from .explicit import ExplicitInstance, exact_pareto_set, is_feasible_refpoint

__all__ = [
    "ApproxParetoSet",
    "ContractViolation",
    "CPApproxSolver",
    "RPApproxSolver",
    "WeightConstruction",
    "WSApproxSolver",
    "approx_cp_via_pareto",
    "coverage_factor",
    "epsilon_pareto_via_gap",
    "fptas_equivalence_delta",
    "gap_beta",
    "gap_via_cp",
    "gap_via_rp_inf",
    "gap_via_rp_pnorm",
    "geometric_grid",
    "pnorm_gap_exponent",
    "rp_via_weighted_sum",
    "select_rp_from_pareto",
    "weight_for_pareto_point",
]


class ContractViolation(RuntimeError):
    """An oracle returned something its contract rules out."""


# ---------------------------------------------------------------------------
# solver wrappers


@dataclass(frozen=True)
class RPApproxSolver:
    """``solve(instance, ctx)`` returns ``y'`` with ``r(y') <= factor * min r``."""

    solve: Callable[[Any, ReferenceContext], ObjectiveVector]
    factor: Fraction = Fraction(1)

    def __post_init__(self):
        object.__setattr__(self, "factor", as_fraction(self.factor))
        if self.factor < 1:
            raise ValueError("approximation factor must be >= 1")

    def __call__(self, instance, ctx: ReferenceContext) -> ObjectiveVector:
        return ObjectiveVector(self.solve(instance, ctx))


@dataclass(frozen=True)
class CPApproxSolver:
    """``solve(instance, norm)`` approximates the compromise solution.

    The factor ``beta`` is usually irrational (a square root), so it is given
    by its square ``factor_squared`` and all uses are exact.
    """

    solve: Callable[[Any, Norm], ObjectiveVector]
    factor_squared: Fraction = Fraction(1)

    def __post_init__(self):
        object.__setattr__(self, "factor_squared", as_fraction(self.factor_squared))
        if self.factor_squared < 1:
            raise ValueError("approximation factor must be >= 1")

    def __call__(self, instance, norm: Norm) -> ObjectiveVector:
        return ObjectiveVector(self.solve(instance, norm))


@dataclass(frozen=True)
class WSApproxSolver:
    """``solve(instance, weights)`` approximates ``min lambda^T y`` within ``factor``."""

    solve: Callable[[Any, Sequence], ObjectiveVector]
    factor: Fraction = Fraction(1)

    def __post_init__(self):
        object.__setattr__(self, "factor", as_fraction(self.factor))

    def __call__(self, instance, weights) -> ObjectiveVector:
        return ObjectiveVector(self.solve(instance, weights))


# ---------------------------------------------------------------------------
# approximate Pareto sets


def coverage_factor(points: Sequence, pareto: Sequence, sense: Sense = Sense.MIN):
    """Smallest ``alpha`` such that ``points`` covers every vector of ``pareto``.

    Min: every ``y`` needs some ``y'`` with ``y' <= alpha * y``.  Max: some
    ``y' >= y / alpha``.  Returns ``math.inf`` when no finite factor works.
    """
    sense = Sense(sense)
    worst: Fraction | float = Fraction(1)
    for y in pareto:
        best: Fraction | float = math.inf
        for z in points:
            need: Fraction | float = Fraction(1)
            for a, b in zip(z, y):
                num, den = (a, b) if sense is Sense.MIN else (b, a)
                if num == 0:
                    continue
                if den == 0:
                    need = math.inf
                    break
                need = max(need, Fraction(num) / den)
            best = min(best, need)
        worst = max(worst, best)
    return worst


@dataclass(frozen=True)
class ApproxParetoSet:
    """A subset of ``Y`` claimed to be an ``alpha``-approximate Pareto set."""

    alpha: Fraction
    points: tuple
    provenance: dict = field(default_factory=dict, compare=False)
    sense: Sense = Sense.MIN

    def __post_init__(self):
        object.__setattr__(self, "alpha", as_fraction(self.alpha))
        object.__setattr__(self, "points", tuple(sorted({ObjectiveVector(p) for p in self.points})))
        object.__setattr__(self, "sense", Sense(self.sense))
        if self.alpha < 1:
            raise ValueError("alpha must be >= 1")

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def observed_factor(self, instance: ExplicitInstance):
        return coverage_factor(self.points, exact_pareto_set(instance, self.sense), self.sense)

    def is_valid_for(self, instance: ExplicitInstance) -> bool:
        if any(p not in instance for p in self.points):
            return False
        return self.observed_factor(instance) <= self.alpha

    def to_json(self) -> dict:
        return {
            "alpha": format_rational(self.alpha),
            "sense": self.sense.value,
            "points": [
                {"point": p.to_json(), "provenance": self.provenance.get(p)} for p in self.points
            ],
        }


def select_rp_from_pareto(approx_set: ApproxParetoSet, ctx: ReferenceContext) -> ObjectiveVector:
    """Best point of an ``alpha``-approximate Pareto set for a reference point problem.

    For a feasible reference point and a monotone norm the result is within
    ``alpha`` of the optimum over the whole instance (Min) or within
    ``1/alpha`` (Max).
    """
    if not approx_set.points:
        raise ValueError("empty approximate Pareto set")
    best = best_val = None
    for y in approx_set.points:
        v = ref_objective(ctx, y)
        if best is None or (v < best_val if ctx.sense is Sense.MIN else v > best_val):
            best, best_val = y, v
    return best


def approx_cp_via_pareto(approx_set: ApproxParetoSet, norm: Norm) -> tuple[ObjectiveVector, ObjectiveVector]:
    """Approximate compromise solution from an ``alpha``-approximate Pareto set (Min).

    Builds ``y^r_i = ceil(min_{y in set} y_i / alpha)``, which satisfies
    ``y^r <= ideal <= alpha * y^r``, and returns ``(y^r, closest point)``.
    The point is an ``alpha**2``-approximate compromise solution.
    """
    if not approx_set.points:
        raise ValueError("empty approximate Pareto set")
    if approx_set.sense is not Sense.MIN:
        raise ValueError("approx_cp_via_pareto is the minimization variant")
    alpha = approx_set.alpha
    k = len(approx_set.points[0])
    yr = ObjectiveVector(math.ceil(min(p[i] for p in approx_set.points) / alpha) for i in range(k))
    ctx = ReferenceContext(yr, norm, Sense.MIN)
    return yr, select_rp_from_pareto(approx_set, ctx)


# ---------------------------------------------------------------------------
# weights that single out a Pareto point


@dataclass(frozen=True)
class WeightConstruction:
    """Weights making a Pareto point the unique closest point to ``y^r``.

    Any ``p > p_threshold`` works; ``p`` holds the default choice
    ``p_threshold + 1``.
    """

    weights: tuple
    p_threshold: Fraction
    p: Fraction
    norm_kind: NormKind

    def norm(self, p=None) -> Norm:
        p = self.p if p is None else as_fraction(p)
        if p <= self.p_threshold:
            raise ValueError(f"p={p} must exceed the threshold {self.p_threshold}")
        return Norm(self.norm_kind, self.weights, p)


def lp_uniqueness_threshold(k: int, bound) -> int:
    """Smallest integer ``t`` with ``(1 + 1/M)**t >= k``, i.e. ``ceil(log k / log(1+1/M))``."""
    M = as_fraction(bound)
    base = 1 + 1 / M
    t = max(0, math.floor(math.log(k) / math.log(float(base))) - 2)
    while base**t < k:
        t += 1
    while t > 0 and base ** (t - 1) >= k:
        t -= 1
    return t


def weight_for_pareto_point(
    inst: ExplicitInstance, y: Sequence, refpoint: Sequence, norm_kind: NormKind | str
) -> WeightConstruction:
    """Weights for which ``y`` is the unique minimizer of ``||z - y^r||^lambda``.

    ``lambda_i = 1 + k`` where ``y_i = y^r_i`` and ``1 / (y_i - y^r_i)``
    otherwise.  Cornered norms need ``p > k*M``; ``l^p`` norms need
    ``(1 + 1/M)**p > k``.
    """
    norm_kind = NormKind(norm_kind)
    if norm_kind is NormKind.INF:
        raise ValueError("weight construction needs a cornered or l^p norm")
    if inst.rational:
        raise ValueError("weight construction needs an integral instance")
    y = ObjectiveVector(y)
    yr = ObjectiveVector(refpoint)
    if y not in inst:
        raise ValueError(f"{y} is not a point of the instance")
    if y not in exact_pareto_set(inst):
        raise ValueError(f"{y} is not Pareto optimal")
    if not is_feasible_refpoint(inst, yr):
        raise InfeasibleReferencePoint(f"reference point {yr} is not feasible")
    k = inst.k
    weights = tuple(
        Fraction(1 + k) if a == b else Fraction(1, a - b) for a, b in zip(y, yr)
    )
    if norm_kind is NormKind.CORNERED:
        threshold = Fraction(k) * inst.bound
    else:
        threshold = Fraction(lp_uniqueness_threshold(k, inst.bound))
    return WeightConstruction(weights, threshold, threshold + 1, norm_kind)


# ---------------------------------------------------------------------------
# RP -> Gap


def gap_beta(alpha) -> Fraction:
    """Largest RP approximation factor the Gap reduction tolerates: ``alpha^2 / (2 alpha - 1)``."""
    a = as_fraction(alpha)
    if a <= 1:
        raise ValueError("alpha must exceed 1")
    return a * a / (2 * a - 1)


def _check_witness(instance, y, y_prime, sense=Sense.MIN):
    if instance is not None and hasattr(instance, "__contains__") and y_prime not in instance:
        raise ContractViolation(f"solver returned {y_prime}, which is not a point of the instance")
    ok = leq(y_prime, y) if sense is Sense.MIN else leq(y, y_prime)
    if not ok:
        raise ContractViolation(f"Gap witness {y_prime} does not satisfy the query {tuple(y)}")


def _prepare_gap(y, alpha, refpoint_provider, instance, rp_solver):
    y = tuple(as_fraction(v) for v in y)
    alpha = as_fraction(alpha)
    if any(v < 0 for v in y):
        raise ValueError("Gap queries must be nonnegative")
    beta = gap_beta(alpha)
    if rp_solver.factor > beta:
        raise ValueError(f"RP solver factor {rp_solver.factor} exceeds alpha^2/(2 alpha - 1) = {beta}")
    yr = ObjectiveVector(refpoint_provider(instance))
    if len(yr) != len(y):
        raise DimensionError("reference point and query differ in length")
    return y, alpha, yr


def gap_via_rp_inf(
    instance,
    y: Sequence,
    alpha,
    refpoint_provider: Callable[[Any], Sequence],
    rp_solver: RPApproxSolver,
    *,
    integral: bool = True,
):
    """Solve ``Gap(alpha)`` with one call to an RP solver for the weighted infinity norm.

    ``refpoint_provider(instance)`` must return a feasible reference point and
    ``rp_solver`` must have factor at most ``alpha^2 / (2 alpha - 1)``.  With
    ``integral=False`` the objectives are assumed strictly positive instead
    of integral, so a zero query coordinate is answered negatively at once.
    """
    y, alpha, yr = _prepare_gap(y, alpha, refpoint_provider, instance, rp_solver)
    if any(a < alpha * b for a, b in zip(y, yr)):
        return NoneBelow()
    if not integral and any(a == 0 for a in y):
        return NoneBelow()
    # y >= alpha*y^r with alpha > 1 leaves y_i == y^r_i only when both are 0
    weights = tuple(Fraction(2) if a == b else 1 / (a - b) for a, b in zip(y, yr))
    ctx = ReferenceContext(yr, Norm.infinity(weights), Sense.MIN)
    y_prime = rp_solver(instance, ctx)
    if ref_objective(ctx, y_prime) <= ref_objective(ctx, y):
        _check_witness(instance, y, y_prime)
        return Witness(y_prime)
    return NoneBelow()


def pnorm_gap_exponent(k: int, bound, q: int) -> int:
    """Integer ``p >= max(log k / log(1 + 1/(2M)), 2kMq)``."""
    M = as_fraction(bound)
    second = math.ceil(2 * k * M * q)
    first = lp_uniqueness_threshold(k, 2 * M)
    return max(first, second, 1)


def gap_via_rp_pnorm(
    instance,
    y: Sequence,
    alpha,
    refpoint_provider: Callable[[Any], Sequence],
    rp_solver: RPApproxSolver,
    norm_kind: NormKind | str,
    *,
    bound,
):
    """``Gap(alpha)`` through one call to an RP solver for a cornered or ``l^p`` norm.

    ``bound`` is an ``M`` with ``Y ⊆ [0, M]^k``.  The exponent is chosen large
    enough that a witness with integral coordinates cannot overshoot a query
    whose largest denominator is ``q``.
    """
    norm_kind = NormKind(norm_kind)
    if norm_kind is NormKind.INF:
        raise ValueError("use gap_via_rp_inf for the infinity norm")
    y, alpha, yr = _prepare_gap(y, alpha, refpoint_provider, instance, rp_solver)
    if any(a < alpha * b for a, b in zip(y, yr)):
        return NoneBelow()
    q = max(v.denominator for v in y)
    p = pnorm_gap_exponent(len(y), bound, q)
    weights = tuple(Fraction(2) if a == b == 0 else 1 / (a - b) for a, b in zip(y, yr))
    ctx = ReferenceContext(yr, Norm(norm_kind, weights, p), Sense.MIN)
    y_prime = rp_solver(instance, ctx)
    if ref_objective(ctx, y_prime) <= ref_objective(ctx, y):
        _check_witness(instance, y, y_prime)
        return Witness(y_prime)
    return NoneBelow()


def _ceil_div_sqrt(x, beta_sq: Fraction) -> int:
    """``ceil(x / sqrt(beta_sq))`` for ``x >= 0``, exactly."""
    x = as_fraction(x)
    target = x * x / beta_sq
    n = math.isqrt(math.floor(target))
    while n * n < target:
        n += 1
    while n > 0 and (n - 1) ** 2 >= target:
        n -= 1
    return n


def cp_refpoint_provider(cp_solver: CPApproxSolver, norm_kind: NormKind | str = NormKind.INF):
    """Reference point from ``k`` single-criterion CP calls.

    For each criterion ``i`` the CP solver runs with unit weight ``e_i`` and
    ``y^r_i = ceil(ybar_i / beta)``; the result satisfies ``y^r <= ideal``.
    """
    norm_kind = NormKind(norm_kind)

    def provider(instance):
        k = instance.k
        coords = []
        for i in range(k):
            unit = tuple(1 if j == i else 0 for j in range(k))
            norm = Norm(norm_kind, unit, None if norm_kind is NormKind.INF else 1, allow_zero=True)
            ybar = cp_solver(instance, norm)
            coords.append(_ceil_div_sqrt(ybar[i], cp_solver.factor_squared))
        return ObjectiveVector(coords)

    return provider


def gap_via_cp(
    instance,
    y: Sequence,
    alpha,
    cp_solver: CPApproxSolver,
    norm_kind: NormKind | str = NormKind.INF,
    *,
    bound=None,
):
    """``Gap(alpha)`` from a compromise-programming solver with factor ``beta``.

    Requires ``beta**2 <= alpha^2 / (2 alpha - 1)``.  The CP solver, run with
    the reference point from :func:`cp_refpoint_provider`, acts as a
    ``beta**2``-approximate RP solver, and the Gap is answered by
    :func:`gap_via_rp_inf` or :func:`gap_via_rp_pnorm`.
    """
    norm_kind = NormKind(norm_kind)
    beta_sq = cp_solver.factor_squared
    if beta_sq > gap_beta(alpha):
        raise ValueError(f"CP solver factor^2 {beta_sq} exceeds alpha^2/(2 alpha - 1)")
    provider = cp_refpoint_provider(cp_solver, norm_kind)
    rp = RPApproxSolver(lambda inst, ctx: cp_solver(inst, ctx.norm), beta_sq)
    if norm_kind is NormKind.INF:
        return gap_via_rp_inf(instance, y, alpha, provider, rp)
    if bound is None:
        bound = instance.bound
    return gap_via_rp_pnorm(instance, y, alpha, provider, rp, norm_kind, bound=bound)


def rp_via_weighted_sum(instance, ctx: ReferenceContext, ws_solver: WSApproxSolver) -> ObjectiveVector:
    """An ``alpha``-approximate weighted-sum solution with the norm's weights.

    For the weighted infinity norm it is a ``k * alpha``-approximate
    reference point solution.
    """
    if ctx.sense is not Sense.MIN:
        raise ValueError("weighted-sum approximation is the minimization variant")
    return ws_solver(instance, ctx.norm.weights)


# ---------------------------------------------------------------------------
# Gap -> approximate Pareto set


def geometric_grid(alpha, top, *, lower=1, include_zero=True) -> list[Fraction]:
    """``[0,] lower, lower*alpha, lower*alpha^2, ...`` up to the first value ``>= top``."""
    alpha = as_fraction(alpha)
    lower = as_fraction(lower)
    if alpha <= 1 or lower <= 0:
        raise ValueError("grid needs alpha > 1 and lower > 0")
    values = [Fraction(0)] if include_zero else []
    v = lower
    while True:
        values.append(v)
        if v >= top:
            return values
        v *= alpha


def epsilon_pareto_via_gap(
    gap: Callable[[Sequence], Any],
    alpha,
    *,
    k: int,
    bound,
    lower=1,
    include_zero: bool = True,
    sense: Sense = Sense.MIN,
) -> ApproxParetoSet:
    """Approximate Pareto set from a ``Gap(alpha)`` oracle by querying a geometric grid.

    Min: every coordinate ranges over ``{0, lower, lower*alpha, ...}`` up to
    ``alpha * bound``, so for each Pareto point ``z`` the query ``b`` with
    ``b_i`` the smallest grid value ``>= alpha * z_i`` forces a witness
    ``<= b <= alpha^2 * z``.  The result is an ``alpha^2``-approximate Pareto
    set.  ``lower`` is a positive lower bound on nonzero objective values
    (1 for integral instances).

    Max: the grid runs downward from ``bound`` by factors of ``alpha``.

    ``gap.batch(queries)`` is used when the oracle provides it.
    """
    alpha = as_fraction(alpha)
    sense = Sense(sense)
    if sense is Sense.MIN:
        axis = geometric_grid(alpha, alpha * as_fraction(bound), lower=lower, include_zero=include_zero)
    else:
        axis = [Fraction(0)] if include_zero else []
        lo = as_fraction(lower)
        v = as_fraction(bound)
        while v >= lo / alpha:
            axis.append(v)
            v /= alpha
        axis.sort()
    queries = list(itertools.product(axis, repeat=k))
    batch = getattr(gap, "batch", None)
    answers = batch(queries) if batch is not None else [gap(q) for q in queries]
    provenance: dict = {}
    for q, ans in zip(queries, answers):
        if isinstance(ans, Witness):
            w = ans.point
            ok = leq(w, q) if sense is Sense.MIN else leq(q, w)
            if not ok:
                raise ContractViolation(f"Gap oracle returned {w} for query {q}")
            if w not in provenance:
                provenance[w] = "grid:" + ",".join(format_rational(v) for v in q)
        elif not isinstance(ans, (NoneBelow, NoneAbove)):
            raise ContractViolation(f"Gap oracle returned {ans!r}")
    from .core import pareto_filter

    if not provenance:
        raise ContractViolation("Gap oracle produced no witness on the whole grid")
    kept = pareto_filter(provenance, sense)
    return ApproxParetoSet(alpha * alpha, tuple(kept), {p: provenance[p] for p in kept}, sense)


# ---------------------------------------------------------------------------
# approximation schemes


def fptas_equivalence_delta(eps, bits: int = 64) -> Fraction:
    """Rational ``delta`` with ``(1 + delta)^2 (1 + 2 eps) <= (1 + eps)^2``.

    ``1 + delta`` is ``sqrt((1+eps)^2 / (2(1+eps) - 1))`` rounded down to a
    multiple of ``2**-bits``, so a ``(1+delta)``-approximate CP solver feeds a
    ``Gap(1+eps)`` solver.  ``delta`` behaves like ``eps^2 / 2``.
    """
    eps = as_fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    target = (1 + eps) ** 2 / (1 + 2 * eps)
    scaled = target.numerator << (2 * bits)
    root = math.isqrt(scaled // target.denominator)
    return Fraction(root, 1 << bits) - 1
