"""Cost-scaling FPTAS for reference point shortest paths.

The exact solver is a label-correcting algorithm that keeps, per node, the
non-dominated cost vectors of partial paths and discards labels whose
reference objective can no longer beat an upper bound ``U``.  Scaling the
edge costs by ``3n / (eps' L)`` and rounding down makes it polynomial.
"""
from __future__ import annotations

import heapq
import json
import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence

from .core import (
    DimensionError,
    InfeasibleReferencePoint,
    Norm,
    NormKind,
    NormValue,
    ObjectiveVector,
    ReferenceContext,
    Sense,
    as_fraction,
    format_rational,
    leq,
    ref_objective,
)


class NoPathError(ValueError):
    """The target cannot be reached from the source."""


@dataclass(frozen=True)
class GraphInstance:
    """Directed graph with ``k``-dimensional nonnegative integral edge costs."""

    n: int
    edges: tuple
    source: int
    target: int
    k: int

    def __init__(self, n: int, edges: Sequence, source: int, target: int, k: int | None = None):
        edges = tuple((int(u), int(v), ObjectiveVector(c)) for u, v, c in edges)
        if k is None:
            if not edges:
                raise ValueError("cannot infer k from an empty edge list")
            k = len(edges[0][2])
        if n < 2:
            raise ValueError("a graph needs at least two nodes")
        if source == target:
            raise ValueError("source and target must differ")
        for u, v, c in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u},{v}) leaves the node range 0..{n - 1}")
            if len(c) != k:
                raise DimensionError(f"edge ({u},{v}) has {len(c)} costs, expected {k}")
            if not c.is_integral:
                raise ValueError("edge costs must be integers")
        if not (0 <= source < n and 0 <= target < n):
            raise ValueError("source or target out of range")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "source", source)
        object.__setattr__(self, "target", target)
        object.__setattr__(self, "k", k)

    @property
    def adjacency(self) -> list[list[int]]:
        adj = self.__dict__.get("_adj")
        if adj is None:
            adj = [[] for _ in range(self.n)]
            for i, (u, _, _) in enumerate(self.edges):
                adj[u].append(i)
            object.__setattr__(self, "_adj", adj)
        return adj

    def path_cost(self, edge_ids: Sequence[int]) -> ObjectiveVector:
        total = [0] * self.k
        for i in edge_ids:
            for j, c in enumerate(self.edges[i][2]):
                total[j] += c
        return ObjectiveVector(total)

    def path_nodes(self, edge_ids: Sequence[int]) -> list[int]:
        if not edge_ids:
            return [self.source]
        return [self.edges[edge_ids[0]][0]] + [self.edges[i][1] for i in edge_ids]

    def with_costs(self, costs: Sequence[Sequence[int]]) -> "GraphInstance":
        return GraphInstance(self.n, [(u, v, c) for (u, v, _), c in zip(self.edges, costs)],
                             self.source, self.target, self.k)

    @property
    def max_cost(self) -> int:
        return max((max(c) for _, _, c in self.edges), default=0)

    def to_json(self) -> dict:
        return {
            "type": "graph",
            "k": self.k,
            "n": self.n,
            "s": self.source,
            "t": self.target,
            "edges": [[u, v, c.to_json()] for u, v, c in self.edges],
        }

    @classmethod
    def from_json(cls, data) -> "GraphInstance":
        if isinstance(data, str):
            data = json.loads(data)
        return cls(data["n"], [tuple(e) for e in data["edges"]], data.get("s", 0),
                   data.get("t", data["n"] - 1), data.get("k"))


@dataclass(frozen=True)
class PathSolution:
    edges: tuple
    nodes: tuple
    cost: ObjectiveVector
    value: NormValue
    labels: int = 0

    def to_json(self) -> dict:
        return {
            "path": list(self.nodes),
            "objective_vector": self.cost.to_json(),
            "r_value": format_rational(self.value.exact) if self.value.is_exact else self.value.to_json(),
            "labels": self.labels,
        }


# ---------------------------------------------------------------------------
# exhaustive and single-criterion oracles


def enumerate_paths(inst: GraphInstance) -> Iterator[tuple[tuple, ObjectiveVector]]:
    """All simple source-target paths as ``(edge ids, cost vector)``."""
    adj = inst.adjacency
    visited = [False] * inst.n
    stack_edges: list[int] = []
    cost = [0] * inst.k

    def walk(u):
        if u == inst.target:
            yield tuple(stack_edges), ObjectiveVector(cost)
            return
        visited[u] = True
        for i in adj[u]:
            v, c = inst.edges[i][1], inst.edges[i][2]
            if visited[v]:
                continue
            stack_edges.append(i)
            for j in range(inst.k):
                cost[j] += c[j]
            yield from walk(v)
            for j in range(inst.k):
                cost[j] -= c[j]
            stack_edges.pop()
        visited[u] = False

    yield from walk(inst.source)


def brute_sp_rp(inst: GraphInstance, ctx: ReferenceContext) -> PathSolution:
    """Reference point optimum by enumerating every simple path."""
    best = None
    for edges, cost in enumerate_paths(inst):
        v = ref_objective(ctx, cost)
        if best is None or v < best[2] or (not v > best[2] and cost < best[1]):
            best = (edges, cost, v)
    if best is None:
        raise NoPathError("target unreachable")
    return PathSolution(best[0], tuple(inst.path_nodes(best[0])), best[1], best[2])


def weighted_shortest_path(inst: GraphInstance, weights: Sequence) -> tuple[tuple, ObjectiveVector]:
    """Dijkstra on the scalar costs ``lambda^T c``; returns ``(edge ids, cost vector)``."""
    lam = [as_fraction(w) for w in weights]
    if len(lam) != inst.k:
        raise DimensionError("weight vector dimension mismatch")
    scalar = [sum(a * b for a, b in zip(lam, c)) for _, _, c in inst.edges]
    dist: list = [None] * inst.n
    pred: list = [None] * inst.n
    dist[inst.source] = Fraction(0)
    heap = [(Fraction(0), inst.source)]
    done = [False] * inst.n
    while heap:
        d, u = heapq.heappop(heap)
        if done[u]:
            continue
        done[u] = True
        if u == inst.target:
            break
        for i in inst.adjacency[u]:
            v = inst.edges[i][1]
            nd = d + scalar[i]
            if dist[v] is None or nd < dist[v]:
                dist[v] = nd
                pred[v] = i
                heapq.heappush(heap, (nd, v))
    if dist[inst.target] is None:
        raise NoPathError("target unreachable")
    edges = []
    v = inst.target
    while v != inst.source:
        i = pred[v]
        edges.append(i)
        v = inst.edges[i][0]
    edges.reverse()
    return tuple(edges), inst.path_cost(edges)


def graph_ideal_point(inst: GraphInstance) -> ObjectiveVector:
    """Component-wise shortest path lengths."""
    coords = []
    for i in range(inst.k):
        unit = [1 if j == i else 0 for j in range(inst.k)]
        _, cost = weighted_shortest_path(inst, unit)
        coords.append(cost[i])
    return ObjectiveVector(coords)


# ---------------------------------------------------------------------------
# bounds


@dataclass(frozen=True)
class Bounds:
    """``L <= OPT <= U`` with ``U = k L``; ``witness`` attains ``U``."""

    L: Fraction
    U: Fraction
    witness: tuple = ()
    witness_cost: ObjectiveVector | None = None

    def to_json(self) -> dict:
        return {"L": format_rational(self.L), "U": format_rational(self.U),
                "witness_cost": None if self.witness_cost is None else self.witness_cost.to_json()}


def _exact_value(v: NormValue) -> Fraction:
    if not v.is_exact:
        raise ValueError("this step needs an infinity or cornered norm")
    return v.const


def bounds_via_weighted_sum(inst: GraphInstance, ctx: ReferenceContext) -> Bounds:
    """Bounds from one weighted-sum shortest path with the norm's weights.

    For a feasible reference point and the infinity or a cornered norm the
    weighted-sum path is a ``k``-approximation, so ``L = r(path) / k``.
    """
    if ctx.norm.kind is NormKind.LP and ctx.norm.p != 1:
        raise ValueError("bounds need an infinity or cornered norm")
    edges, cost = weighted_shortest_path(inst, ctx.norm.weights)
    U = _exact_value(ref_objective(ctx, cost))
    return Bounds(U / inst.k, U, edges, cost)


# ---------------------------------------------------------------------------
# exact label-correcting solver


def _lower_bound(ctx: ReferenceContext, cost: Sequence) -> NormValue:
    """``r`` at the smallest vector any completion of ``cost`` can reach."""
    gap = tuple(max(c - r, 0) for c, r in zip(cost, ctx.refpoint))
    return ref_objective(ctx, tuple(r + g for r, g in zip(ctx.refpoint, gap)))


def pseudopoly_sp_rp(inst: GraphInstance, ctx: ReferenceContext, U=None, *, prune: bool = True) -> PathSolution:
    """Exact reference point shortest path via per-node Pareto labels.

    ``U`` is an upper bound on the optimum; labels whose objective lower
    bound exceeds it are dropped.  Without ``U`` only dominance pruning is
    applied.  Ties go to the lexicographically smallest cost vector.
    """
    if len(ctx.refpoint) != inst.k:
        raise DimensionError("reference point dimension mismatch")
    bound = None if (U is None or not prune) else NormValue.of(U)
    k = inst.k
    # label: (cost tuple, node, predecessor label index, edge id)
    labels: list = [((0,) * k, inst.source, -1, -1)]
    alive = [True]
    at_node: list[list[int]] = [[] for _ in range(inst.n)]
    at_node[inst.source].append(0)
    queue = deque([0])
    while queue:
        li = queue.popleft()
        if not alive[li]:
            continue
        cost, u, _, _ = labels[li]
        if u == inst.target:
            continue
        for ei in inst.adjacency[u]:
            _, v, c = inst.edges[ei]
            new = tuple(a + b for a, b in zip(cost, c))
            if bound is not None and _lower_bound(ctx, new) > bound:
                continue
            bucket = at_node[v]
            if any(all(a <= b for a, b in zip(labels[j][0], new)) for j in bucket):
                continue
            keep = []
            for j in bucket:
                if all(a <= b for a, b in zip(new, labels[j][0])):
                    alive[j] = False
                else:
                    keep.append(j)
            labels.append((new, v, li, ei))
            alive.append(True)
            keep.append(len(labels) - 1)
            at_node[v] = keep
            queue.append(len(labels) - 1)
    finals = at_node[inst.target]
    if not finals:
        if bound is not None:
            # the bound may have been below the optimum; retry without it
            return pseudopoly_sp_rp(inst, ctx, None)
        raise NoPathError("target unreachable")
    best = None
    for j in finals:
        cost = ObjectiveVector(labels[j][0])
        val = ref_objective(ctx, cost)
        if best is None or val < best[1] or (not val > best[1] and cost < labels[best[0]][0]):
            best = (j, val)
    j, val = best
    edges = []
    while labels[j][2] >= 0:
        edges.append(labels[j][3])
        j = labels[j][2]
    edges.reverse()
    return PathSolution(tuple(edges), tuple(inst.path_nodes(edges)), inst.path_cost(edges), val, len(labels))


# ---------------------------------------------------------------------------
# scaling


def epsilon_prime(eps, norm: Norm) -> Fraction:
    """``eps`` divided by the norm of the all-ones vector.

    With unit weights this is ``eps / (1 + k/p)`` for the cornered norm and
    ``eps`` for the infinity norm.
    """
    if norm.kind is NormKind.LP and norm.p != 1:
        raise ValueError("scaling needs an infinity or cornered norm")
    return as_fraction(eps) / norm.unit_value()


@dataclass(frozen=True)
class ScaledInstance:
    """Edge costs ``floor(scale * c)`` with ``scale = 3n / (eps' L)``.

    ``refpoint`` is ``floor(scale * y^r)`` clipped to the ideal point of the
    scaled graph (so it stays feasible there); ``raw_refpoint`` is the
    unclipped value.
    """

    original: GraphInstance
    graph: GraphInstance
    scale: Fraction
    eps_prime: Fraction
    L: Fraction
    refpoint: ObjectiveVector
    raw_refpoint: ObjectiveVector
    ideal: ObjectiveVector

    @property
    def unit(self) -> Fraction:
        """Original cost represented by one scaled unit, ``eps' L / 3n``."""
        return 1 / self.scale

    def sandwich_holds(self) -> bool:
        """``c_bar / scale <= c < (c_bar + 1) / scale`` on every edge."""
        t = self.unit
        for (_, _, c), (_, _, cb) in zip(self.original.edges, self.graph.edges):
            for a, b in zip(c, cb):
                if not (t * b <= a < t * (b + 1)):
                    return False
        return True


def scale_costs(costs: Sequence[int], scale: Fraction) -> ObjectiveVector:
    return ObjectiveVector(math.floor(scale * c) for c in costs)


def scale_instance(inst: GraphInstance, refpoint: Sequence, eps, p=None, L=None, *,
                   norm: Norm | None = None) -> ScaledInstance:
    """Scale ``inst`` for accuracy ``eps``.

    Either ``norm`` is given, or ``p`` (``None`` for the infinity norm) with
    unit weights is assumed.  ``L`` must be a positive lower bound on the
    optimum.
    """
    eps = as_fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    if norm is None:
        ones = (1,) * inst.k
        norm = Norm.infinity(ones) if p is None or p == math.inf else Norm.cornered(p, ones)
    L = as_fraction(L)
    if L <= 0:
        raise ValueError("L must be positive")
    ep = epsilon_prime(eps, norm)
    scale = Fraction(3 * inst.n) / (ep * L)
    graph = inst.with_costs([scale_costs(c, scale) for _, _, c in inst.edges])
    ideal = graph_ideal_point(graph)
    raw = scale_costs(refpoint, scale)
    clipped = ObjectiveVector(min(a, b) for a, b in zip(raw, ideal))
    return ScaledInstance(inst, graph, scale, ep, L, clipped, raw, ideal)


@dataclass(frozen=True)
class FPTASResult:
    solution: PathSolution
    bounds: Bounds
    scaled: ScaledInstance | None
    eps: Fraction
    certificate: dict = field(default_factory=dict)

    @property
    def value(self) -> NormValue:
        return self.solution.value

    def to_json(self) -> dict:
        out = self.solution.to_json()
        out["eps"] = format_rational(self.eps)
        out["certificate"] = self.certificate
        return out


def _check_feasible(inst: GraphInstance, ctx: ReferenceContext):
    ideal = graph_ideal_point(inst)
    if not leq(ctx.refpoint, ideal):
        raise InfeasibleReferencePoint(f"reference point {ctx.refpoint} exceeds the ideal point {ideal}")
    return ideal


def _fptas(inst: GraphInstance, ctx: ReferenceContext, eps, scaled_ref) -> FPTASResult:
    eps = as_fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    if ctx.sense is not Sense.MIN:
        raise ValueError("the scaling scheme is for minimization")
    bounds = bounds_via_weighted_sum(inst, ctx)
    if bounds.U == 0:
        # the weighted-sum path already attains r = 0
        sol = PathSolution(bounds.witness, tuple(inst.path_nodes(bounds.witness)), bounds.witness_cost,
                           NormValue.of(0))
        return FPTASResult(sol, bounds, None, eps, {"L": "0", "U": "0", "exact": True})
    scaled = scale_instance(inst, ctx.refpoint, eps, L=bounds.L, norm=ctx.norm)
    sref = scaled_ref(scaled)
    sctx = ReferenceContext(sref, ctx.norm, Sense.MIN)
    sbounds = bounds_via_weighted_sum(scaled.graph, sctx)
    ssol = pseudopoly_sp_rp(scaled.graph, sctx, sbounds.U)
    cost = inst.path_cost(ssol.edges)
    sol = PathSolution(ssol.edges, ssol.nodes, cost, ref_objective(ctx, cost), ssol.labels)
    cert = {
        "L": format_rational(bounds.L),
        "U": format_rational(bounds.U),
        "eps_prime": format_rational(scaled.eps_prime),
        "scale": format_rational(scaled.scale),
        "scaled_refpoint": ObjectiveVector(sref).to_json(),
        "scaled_U": format_rational(sbounds.U),
        "scaled_value": format_rational(_exact_value(ssol.value)),
        "guarantee": format_rational((1 + eps)),
    }
    return FPTASResult(sol, bounds, scaled, eps, cert)


def fptas_rp_sp(inst: GraphInstance, ctx: ReferenceContext, eps) -> FPTASResult:
    """``(1 + eps)``-approximate reference point shortest path.

    The norm must be the infinity norm or a cornered norm, and the reference
    point must be feasible.
    """
    _check_feasible(inst, ctx)
    return _fptas(inst, ctx, eps, lambda s: s.refpoint)


def fptas_cp_sp(inst: GraphInstance, norm: Norm, eps) -> FPTASResult:
    """``(1 + eps)``-approximate compromise shortest path.

    The scaled instance is solved at its own ideal point; the returned value
    is measured at the ideal point of the original graph.
    """
    ideal = graph_ideal_point(inst)
    ctx = ReferenceContext(ideal, norm, Sense.MIN, verified=True)
    return _fptas(inst, ctx, eps, lambda s: s.ideal)


def scaled_ideal_sandwich(scaled: ScaledInstance, original_ideal: Sequence) -> bool:
    """``t * ideal_bar <= ideal < t * ideal_bar + eps' L / 3`` component-wise, with ``t = 1/scale``."""
    t = scaled.unit
    slack = scaled.eps_prime * scaled.L / 3
    return all(t * b <= a < t * b + slack for a, b in zip(original_ideal, scaled.ideal))
