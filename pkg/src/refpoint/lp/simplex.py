"""Exact two-phase primal simplex over rationals with Bland's rule."""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from ..core import DimensionError, as_fraction, format_rational

RELATIONS = ("<=", ">=", "=")


@dataclass(frozen=True)
class Polyhedron:
    """``{x : a_i x rel_i b_i}`` with per-variable nonnegativity flags.

    Rows are ``(a, rel, b)`` with ``rel`` one of ``"<="``, ``">="``, ``"="``.
    Variables are nonnegative unless ``nonneg`` says otherwise.
    """

    n: int
    rows: tuple
    nonneg: tuple

    def __init__(self, n: int, rows: Sequence = (), nonneg: Sequence[bool] | None = None):
        clean = []
        for a, rel, b in rows:
            a = tuple(as_fraction(v) for v in a)
            if len(a) != n:
                raise DimensionError(f"row of length {len(a)} in a polyhedron with {n} variables")
            if rel not in RELATIONS:
                raise ValueError(f"unknown relation {rel!r}")
            clean.append((a, rel, as_fraction(b)))
        if nonneg is None:
            nonneg = (True,) * n
        if len(nonneg) != n:
            raise DimensionError("nonnegativity flags do not match the variable count")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "rows", tuple(clean))
        object.__setattr__(self, "nonneg", tuple(bool(f) for f in nonneg))

    def contains(self, x: Sequence) -> bool:
        x = [as_fraction(v) for v in x]
        if len(x) != self.n:
            raise DimensionError("point dimension mismatch")
        if any(f and v < 0 for f, v in zip(self.nonneg, x)):
            return False
        for a, rel, b in self.rows:
            lhs = sum(ai * xi for ai, xi in zip(a, x))
            if rel == "<=" and lhs > b or rel == ">=" and lhs < b or rel == "=" and lhs != b:
                return False
        return True

    def extend(self, extra_vars: int, rows: Sequence = (), nonneg: Sequence[bool] = ()) -> "Polyhedron":
        """Append ``extra_vars`` columns (zero in old rows) and new rows over all columns."""
        old = [(a + (0,) * extra_vars, rel, b) for a, rel, b in self.rows]
        flags = self.nonneg + tuple(nonneg or (True,) * extra_vars)
        return Polyhedron(self.n + extra_vars, old + list(rows), flags)

    def to_json(self) -> dict:
        return {
            "type": "lp",
            "n": self.n,
            "rows": [[[format_rational(v) for v in a], rel, format_rational(b)] for a, rel, b in self.rows],
            "nonneg": list(self.nonneg),
        }

    @classmethod
    def from_json(cls, data) -> "Polyhedron":
        if isinstance(data, str):
            data = json.loads(data)
        return cls(data["n"], [tuple(r) for r in data["rows"]], data.get("nonneg"))


@dataclass(frozen=True)
class LPResult:
    status: str
    x: tuple | None = None
    value: Fraction | None = None
    pivots: int = 0

    @property
    def optimal(self) -> bool:
        return self.status == "optimal"


def Optimal(x, value, pivots=0) -> LPResult:
    return LPResult("optimal", tuple(x), value, pivots)


INFEASIBLE = LPResult("infeasible")
UNBOUNDED = LPResult("unbounded")


class _Tableau:
    """Dense tableau ``rows[i] = [coefficients..., rhs]`` with one cost row."""

    def __init__(self, rows, basis, cost):
        self.rows = rows
        self.basis = basis
        self.width = len(rows[0]) - 1 if rows else 0
        self.set_cost(cost)
        self.pivots = 0

    def set_cost(self, cost):
        # reduced cost row: c_j - c_B B^-1 A_j; last entry is -objective
        z = list(cost) + [Fraction(0)]
        for i, b in enumerate(self.basis):
            cb = z[b]
            if cb:
                row = self.rows[i]
                z = [zj - cb * rj for zj, rj in zip(z, row)]
        self.z = z

    def pivot(self, r, c):
        row = self.rows[r]
        inv = 1 / row[c]
        row = [v * inv for v in row]
        self.rows[r] = row
        for i, other in enumerate(self.rows):
            if i != r and other[c]:
                f = other[c]
                self.rows[i] = [a - f * b for a, b in zip(other, row)]
        if self.z[c]:
            f = self.z[c]
            self.z = [a - f * b for a, b in zip(self.z, row)]
        self.basis[r] = c
        self.pivots += 1

    def run(self, allowed) -> str:
        """Minimize with Bland's rule over columns in ``allowed``."""
        while True:
            enter = next((j for j in allowed if self.z[j] < 0), None)
            if enter is None:
                return "optimal"
            best = None
            for i, row in enumerate(self.rows):
                a = row[enter]
                if a > 0:
                    ratio = row[-1] / a
                    if best is None or ratio < best[0] or (ratio == best[0] and self.basis[i] < self.basis[best[1]]):
                        best = (ratio, i)
            if best is None:
                return "unbounded"
            self.pivot(best[1], enter)


def simplex_solve(poly: Polyhedron, objective: Sequence, sense: str = "min") -> LPResult:
    """Optimize ``objective . x`` over ``poly`` exactly.

    Returns an optimal vertex, or ``INFEASIBLE`` / ``UNBOUNDED``.
    """
    c = [as_fraction(v) for v in objective]
    if len(c) != poly.n:
        raise DimensionError("objective length does not match the variable count")
    if sense not in ("min", "max"):
        raise ValueError("sense must be 'min' or 'max'")
    if sense == "max":
        c = [-v for v in c]
    # free variables become x+ - x-
    cols = []
    for j, flag in enumerate(poly.nonneg):
        cols.append((j, 1))
        if not flag:
            cols.append((j, -1))
    nx = len(cols)
    rows = []
    for a, rel, b in poly.rows:
        coeffs = [a[j] * s for j, s in cols]
        if b < 0:
            coeffs = [-v for v in coeffs]
            b = -b
            rel = {"<=": ">=", ">=": "<=", "=": "="}[rel]
        rows.append((coeffs, rel, b))
    n_slack = sum(1 for _, rel, _ in rows if rel != "=")
    n_art = sum(1 for _, rel, _ in rows if rel != "<=")
    width = nx + n_slack + n_art
    table = []
    basis = []
    s_idx = nx
    a_idx = nx + n_slack
    for coeffs, rel, b in rows:
        line = coeffs + [Fraction(0)] * (n_slack + n_art) + [b]
        if rel == "<=":
            line[s_idx] = Fraction(1)
            basis.append(s_idx)
            s_idx += 1
        else:
            if rel == ">=":
                line[s_idx] = Fraction(-1)
                s_idx += 1
            line[a_idx] = Fraction(1)
            basis.append(a_idx)
            a_idx += 1
        table.append(line)
    if not table:
        # no constraints: optimum at 0 unless some direction decreases
        if any(v < 0 for v in c) or any(not f and v != 0 for f, v in zip(poly.nonneg, c)):
            return UNBOUNDED
        return Optimal([Fraction(0)] * poly.n, Fraction(0))
    art_start = nx + n_slack
    phase1 = [Fraction(0)] * art_start + [Fraction(1)] * n_art
    tab = _Tableau(table, basis, phase1)
    tab.run(range(width))
    if -tab.z[-1] > 0:
        return LPResult("infeasible", pivots=tab.pivots)
    # drive artificial columns out of the basis
    i = 0
    while i < len(tab.rows):
        if tab.basis[i] >= art_start:
            col = next((j for j in range(art_start) if tab.rows[i][j] != 0), None)
            if col is None:
                del tab.rows[i]
                del tab.basis[i]
                continue
            tab.pivot(i, col)
        i += 1
    tab.rows = [r[:art_start] + [r[-1]] for r in tab.rows]
    cost = [c[j] * s for j, s in cols] + [Fraction(0)] * n_slack
    tab.set_cost(cost)
    if tab.run(range(art_start)) == "unbounded":
        return LPResult("unbounded", pivots=tab.pivots)
    values = [Fraction(0)] * art_start
    for r, b in zip(tab.rows, tab.basis):
        values[b] = r[-1]
    x = [Fraction(0)] * poly.n
    for (j, s), v in zip(cols, values):
        x[j] += s * v
    obj = sum(a * b for a, b in zip(objective, x))
    return Optimal(x, as_fraction(obj), tab.pivots)
