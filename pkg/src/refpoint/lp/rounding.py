"""Covering problems and oblivious LP rounding."""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from ..core import (
    DimensionError,
    InfeasibleReferencePoint,
    ObjectiveVector,
    ReferenceContext,
    as_fraction,
    format_rational,
    leq,
    ref_objective,
)
from .rp import RPProgram, image, lp_ideal_point, rp_lp_solve
from .simplex import Polyhedron


@dataclass(frozen=True)
class CoveringInstance:
    """Set cover with ``k``-dimensional integral set costs.

    ``kappa`` is the largest number of sets containing one element, the
    factor of threshold rounding.  For vertex cover (elements are edges,
    sets are vertices) it is 2.
    """

    elements: int
    sets: tuple
    costs: tuple

    def __init__(self, elements: int, sets: Sequence[Sequence[int]], costs: Sequence[Sequence[int]]):
        sets = tuple(tuple(sorted(set(s))) for s in sets)
        costs = tuple(ObjectiveVector(c) for c in costs)
        if len(sets) != len(costs):
            raise DimensionError("one cost vector per set is required")
        if not costs:
            raise ValueError("a covering instance needs at least one set")
        k = len(costs[0])
        if any(len(c) != k for c in costs):
            raise DimensionError("cost vectors differ in length")
        if any(not c.is_integral for c in costs):
            raise ValueError("set costs must be integral")
        for s in sets:
            if any(not 0 <= e < elements for e in s):
                raise ValueError(f"set {s} names an element outside 0..{elements - 1}")
        covered = set().union(*sets)
        if len(covered) != elements:
            missing = sorted(set(range(elements)) - covered)
            raise ValueError(f"elements {missing} are in no set")
        object.__setattr__(self, "elements", elements)
        object.__setattr__(self, "sets", sets)
        object.__setattr__(self, "costs", costs)

    @property
    def k(self) -> int:
        return len(self.costs[0])

    @property
    def kappa(self) -> int:
        return max(sum(1 for s in self.sets if e in s) for e in range(self.elements))

    @property
    def max_set_size(self) -> int:
        return max(len(s) for s in self.sets)

    @property
    def cost_matrix(self) -> tuple:
        return tuple(tuple(c[i] for c in self.costs) for i in range(self.k))

    def relaxation(self) -> Polyhedron:
        m = len(self.sets)
        rows = []
        for e in range(self.elements):
            rows.append((tuple(1 if e in s else 0 for s in self.sets), ">=", 1))
        for j in range(m):
            rows.append((tuple(1 if i == j else 0 for i in range(m)), "<=", 1))
        return Polyhedron(m, rows)

    def is_cover(self, x: Sequence) -> bool:
        chosen = [s for s, v in zip(self.sets, x) if v]
        return len(set().union(*chosen)) == self.elements if chosen else self.elements == 0

    def cost(self, x: Sequence) -> ObjectiveVector:
        return image(self.cost_matrix, x)

    def all_covers(self):
        for bits in itertools.product((0, 1), repeat=len(self.sets)):
            if self.is_cover(bits):
                yield bits

    def to_json(self) -> dict:
        return {
            "type": "covering",
            "k": self.k,
            "elements": self.elements,
            "sets": [{"members": list(s), "cost": c.to_json()} for s, c in zip(self.sets, self.costs)],
        }

    @classmethod
    def from_json(cls, data) -> "CoveringInstance":
        if isinstance(data, str):
            data = json.loads(data)
        inst = cls(data["elements"], [s["members"] for s in data["sets"]], [s["cost"] for s in data["sets"]])
        if "k" in data and data["k"] != inst.k:
            raise DimensionError(f"declared k={data['k']} but costs have dimension {inst.k}")
        return inst

    @classmethod
    def vertex_cover(cls, n: int, edges: Sequence[tuple[int, int]], costs: Sequence[Sequence[int]]):
        """Vertex cover of a graph on ``n`` vertices as a covering instance."""
        sets = [[i for i, (u, v) in enumerate(edges) if w in (u, v)] for w in range(n)]
        return cls(len(edges), sets, costs)


@dataclass(frozen=True)
class RoundingRule:
    """Maps a fractional point to an integral one, losing at most ``factor``.

    ``oblivious`` rules ignore the cost vector, so ``rule(x) <= factor * x``
    coordinate-wise bounds every nonnegative linear cost at once.
    """

    apply: Callable[[Sequence], tuple]
    factor: Fraction
    oblivious: bool = True

    def __call__(self, x: Sequence) -> tuple:
        return tuple(self.apply(x))


def hochbaum_round(instance: CoveringInstance, x: Sequence) -> tuple:
    """Threshold rounding: pick set ``j`` iff ``x_j >= 1/kappa``."""
    x = [as_fraction(v) for v in x]
    if len(x) != len(instance.sets):
        raise DimensionError("fractional point has the wrong length")
    if not instance.relaxation().contains(x):
        raise ValueError("the fractional point is not feasible for the covering relaxation")
    cut = Fraction(1, instance.kappa)
    return tuple(1 if v >= cut else 0 for v in x)


def hochbaum_rule(instance: CoveringInstance) -> RoundingRule:
    return RoundingRule(lambda x: hochbaum_round(instance, x), Fraction(instance.kappa))


@dataclass(frozen=True)
class RoundingResult:
    x: tuple
    point: ObjectiveVector
    value: Fraction
    fractional_x: tuple
    fractional_point: ObjectiveVector
    fractional_value: Fraction
    factor: Fraction

    def to_json(self) -> dict:
        return {
            "solution": list(self.x),
            "objective_vector": self.point.to_json(),
            "r_value": format_rational(self.value),
            "r_decimal": float(self.value),
            "fractional": [format_rational(v) for v in self.fractional_x],
            "fractional_r_value": format_rational(self.fractional_value),
            "factor_guarantee": format_rational(self.factor),
        }


def rp_via_lp_rounding(instance: CoveringInstance, ctx: ReferenceContext, rule: RoundingRule | None = None,
                       *, check_refpoint: bool = True) -> RoundingResult:
    """Solve the relaxed reference point program and round the fractional optimum.

    With an oblivious rule of factor ``alpha`` and a reference point below
    the ideal point of the relaxation, ``r(C x) <= alpha * min r`` over
    integral covers.
    """
    if rule is None:
        rule = hochbaum_rule(instance)
    poly = instance.relaxation()
    C = instance.cost_matrix
    if check_refpoint:
        ideal = lp_ideal_point(poly, C)
        if not leq(ctx.refpoint, ideal):
            raise InfeasibleReferencePoint(
                f"reference point {ctx.refpoint} exceeds the ideal point {ideal} of the relaxation"
            )
    frac = rp_lp_solve(RPProgram(poly, C, ctx))
    x = rule(frac.x)
    if not instance.is_cover(x):
        raise ValueError("rounding produced an infeasible solution")
    point = instance.cost(x)
    value = ref_objective(ctx, point).const
    return RoundingResult(x, point, value, frac.x, frac.point, frac.value, rule.factor)


def brute_covering_rp(instance: CoveringInstance, ctx: ReferenceContext) -> tuple[tuple, Fraction]:
    """Exact integral reference point optimum by subset enumeration."""
    best = None
    for x in instance.all_covers():
        v = ref_objective(ctx, instance.cost(x)).const
        if best is None or v < best[1]:
            best = (x, v)
    return best
