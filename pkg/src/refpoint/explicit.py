"""Explicit finite instances and the brute-force oracles used as ground truth."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .core import (
    DimensionError,
    InfeasibleReferencePoint,
    Norm,
    NoneBelow,
    NormValue,
    ObjectiveVector,
    ReferenceContext,
    Sense,
    Witness,
    as_fraction,
    leq,
    pareto_filter,
    rational_json,
)


@dataclass(frozen=True)
class ExplicitInstance:
    """The image ``Y = c(X)`` of a finite instance, listed point by point.

    ``bound`` is an ``M`` with ``Y ⊆ [0, M]^k``; it defaults to the largest
    coordinate that occurs.
    """

    points: tuple
    bound: int | Fraction
    rational: bool = False

    def __init__(self, points: Iterable[Sequence], bound=None, rational: bool | None = None):
        pts = tuple(sorted({ObjectiveVector(p) for p in points}))
        if not pts:
            raise ValueError("an instance needs at least one point")
        k = len(pts[0])
        if any(len(p) != k for p in pts):
            raise DimensionError("points differ in dimension")
        integral = all(p.is_integral for p in pts)
        if rational is None:
            rational = not integral
        elif not rational and not integral:
            raise ValueError("non-integral points in an instance not flagged rational")
        top = max(max(p) for p in pts)
        if bound is None:
            bound = max(top, 1)
        bound = as_fraction(bound)
        if bound <= 0 or top > bound:
            raise ValueError(f"bound {bound} does not contain every point (max coordinate {top})")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "bound", bound.numerator if bound.denominator == 1 else bound)
        object.__setattr__(self, "rational", rational)

    @property
    def k(self) -> int:
        return len(self.points[0])

    @property
    def M(self):
        return self.bound

    def __contains__(self, y) -> bool:
        try:
            return ObjectiveVector(y) in self._index
        except (ValueError, TypeError):
            return False

    @property
    def _index(self) -> frozenset:
        idx = self.__dict__.get("_index_cache")
        if idx is None:
            idx = frozenset(self.points)
            object.__setattr__(self, "_index_cache", idx)
        return idx

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def without(self, *drop) -> "ExplicitInstance":
        gone = {ObjectiveVector(d) for d in drop}
        return ExplicitInstance([p for p in self.points if p not in gone], self.bound, self.rational)

    def to_json(self) -> dict:
        return {"k": self.k, "points": [p.to_json() for p in self.points], "M": rational_json(self.bound)}

    @classmethod
    def from_json(cls, data) -> "ExplicitInstance":
        if isinstance(data, str):
            data = json.loads(data)
        inst = cls(data["points"], data.get("M"))
        if "k" in data and data["k"] != inst.k:
            raise DimensionError(f"declared k={data['k']} but points have dimension {inst.k}")
        return inst


def ideal_point(inst: ExplicitInstance, sense: Sense = Sense.MIN) -> ObjectiveVector:
    pick = min if Sense(sense) is Sense.MIN else max
    return ObjectiveVector(pick(p[i] for p in inst.points) for i in range(inst.k))


def is_feasible_refpoint(inst: ExplicitInstance, refpoint: Sequence, sense: Sense = Sense.MIN) -> bool:
    if len(refpoint) != inst.k:
        raise DimensionError("reference point dimension mismatch")
    ideal = ideal_point(inst, sense)
    if Sense(sense) is Sense.MIN:
        return leq(refpoint, ideal)
    return leq(ideal, refpoint)


def _best(points, key, sense: Sense):
    """Arg-optimum of ``key`` with ties going to the lexicographically smallest point."""
    best = best_val = None
    for y in points:  # points are sorted, so strict improvement keeps the smallest
        v = key(y)
        if best is None or (v < best_val if sense is Sense.MIN else v > best_val):
            best, best_val = y, v
    return best, best_val


def brute_rp_optimum(inst: ExplicitInstance, ctx: ReferenceContext) -> tuple[ObjectiveVector, NormValue]:
    """Exact reference point solution by enumeration."""
    if not is_feasible_refpoint(inst, ctx.refpoint, ctx.sense):
        raise InfeasibleReferencePoint(
            f"reference point {ctx.refpoint} is not feasible (ideal {ideal_point(inst, ctx.sense)})"
        )
    return _best(inst.points, ctx, ctx.sense)


def brute_cp_optimum(inst: ExplicitInstance, norm: Norm, sense: Sense = Sense.MIN) -> tuple[ObjectiveVector, NormValue]:
    """Exact compromise solution: reference point solution at the ideal point."""
    ctx = ReferenceContext(ideal_point(inst, sense), norm, sense, verified=True)
    return _best(inst.points, ctx, Sense(sense))


def brute_weighted_sum(inst: ExplicitInstance, weights: Sequence, sense: Sense = Sense.MIN) -> ObjectiveVector:
    lam = [as_fraction(w) for w in weights]
    if len(lam) != inst.k:
        raise DimensionError("weight vector dimension mismatch")
    y, _ = _best(inst.points, lambda y: sum(a * b for a, b in zip(lam, y)), Sense(sense))
    return y


def exact_pareto_set(inst: ExplicitInstance, sense: Sense = Sense.MIN) -> list[ObjectiveVector]:
    return pareto_filter(inst.points, sense)


class ExactGapOracle:
    """Exact ``Gap(alpha)`` oracle over an explicit instance.

    Prefers a witness whenever one exists, returning the lexicographically
    smallest point ``<= y``.  ``batch`` answers many queries at once.
    """

    def __init__(self, inst: ExplicitInstance, alpha=2):
        self.instance = inst
        self.alpha = as_fraction(alpha)
        if self.alpha <= 1:
            raise ValueError("Gap needs alpha > 1")
        self._array = None
        if not inst.rational and inst.bound < 2**62:
            self._array = np.array(inst.points, dtype=np.int64)

    def _floor(self, y):
        return tuple(math.floor(v) for v in y)

    def __call__(self, y: Sequence):
        if len(y) != self.instance.k:
            raise DimensionError("query dimension mismatch")
        if any(as_fraction(v) < 0 for v in y):
            raise ValueError("Gap queries must be nonnegative")
        cut = self._floor(y) if not self.instance.rational else tuple(y)
        for p in self.instance.points:
            if leq(p, cut):
                return Witness(p)
        return NoneBelow()

    def batch(self, queries: Sequence[Sequence]) -> list:
        if self._array is None or not queries:
            return [self(q) for q in queries]
        # grid queries share coordinate objects; cache floors by identity
        floors: dict = {}
        rows = []
        for q in queries:
            row = []
            for v in q:
                f = floors.get(id(v))
                if f is None:
                    f = floors[id(v)] = (v, math.floor(v))
                row.append(f[1])
            rows.append(row)
        if max(max(r) for r in rows) >= 2**62:
            return [self(q) for q in queries]
        Q = np.array(rows, dtype=np.int64)
        out = []
        P = self._array
        step = max(1, 2_000_000 // max(1, P.size))
        for start in range(0, len(Q), step):
            block = Q[start:start + step]
            mask = (P[None, :, :] <= block[:, None, :]).all(axis=2)
            hit = mask.any(axis=1)
            first = mask.argmax(axis=1)
            for h, f in zip(hit, first):
                out.append(Witness(self.instance.points[f]) if h else NoneBelow())
        return out


def gap_oracle_exact(inst: ExplicitInstance, y: Sequence, alpha) -> Witness | NoneBelow:
    """Answer ``Gap(alpha)`` exactly: a point ``<= y`` if one exists, else NoneBelow."""
    return ExactGapOracle(inst, alpha)(y)
