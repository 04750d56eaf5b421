"""Seeded random instances for tests and the ``verify`` suites."""
from __future__ import annotations

import random
from fractions import Fraction
from typing import Sequence

from .core import ObjectiveVector, Sense, leq
from .explicit import ExplicitInstance, exact_pareto_set


def random_explicit(rng: random.Random, *, k: int | None = None, max_points: int = 64, max_bound: int = 50,
                    min_points: int = 1) -> ExplicitInstance:
    """Integral instance with ``k`` in {2, 3}, at most ``max_points`` points and ``M <= max_bound``.

    Half of the instances are drawn close to an anti-chain (points near a
    random hyperplane) so that Pareto sets are large.
    """
    if k is None:
        k = rng.choice((2, 3))
    n = rng.randint(min_points, max_points)
    M = rng.randint(1, max_bound)
    pts = set()
    front = rng.random() < 0.5
    for _ in range(n):
        if front:
            head = [rng.randint(0, M) for _ in range(k - 1)]
            last = M - sum(head) + rng.randint(-M // 4, M // 4)
            pts.add(tuple(head) + (min(M, max(0, last)),))
        else:
            pts.add(tuple(rng.randint(0, M) for _ in range(k)))
    return ExplicitInstance(pts, bound=M)


def corpus(seed: int = 0, size: int = 200, **kwargs) -> list[ExplicitInstance]:
    rng = random.Random(seed)
    return [random_explicit(rng, **kwargs) for _ in range(size)]


def random_approx_pareto(rng: random.Random, inst: ExplicitInstance, alpha, sense: Sense = Sense.MIN) -> list:
    """A random ``alpha``-approximate Pareto set of ``inst``.

    Pareto points are visited in random order; an uncovered one is covered by
    a random point of the instance that covers it within ``alpha``.
    """
    alpha = Fraction(alpha)
    pareto = exact_pareto_set(inst, sense)
    rng.shuffle(pareto)
    chosen: list = []

    def covers(z, y):
        if sense is Sense.MIN:
            return leq(z, tuple(alpha * v for v in y))
        return leq(y, tuple(alpha * v for v in z))

    for y in pareto:
        if any(covers(z, y) for z in chosen):
            continue
        options = [z for z in inst.points if covers(z, y)]
        chosen.append(rng.choice(options))
    return chosen


def random_refpoint(rng: random.Random, inst: ExplicitInstance, sense: Sense = Sense.MIN) -> ObjectiveVector:
    """Feasible reference point: below the ideal point (Min) or above it (Max)."""
    from .explicit import ideal_point

    ideal = ideal_point(inst, sense)
    if sense is Sense.MIN:
        return ObjectiveVector(rng.randint(0, v) for v in ideal)
    return ObjectiveVector(v + rng.randint(0, max(1, v)) for v in ideal)


def random_weights(rng: random.Random, k: int, *, positive: bool = True, denominator: int = 6) -> tuple:
    lo = 1 if positive else 0
    while True:
        w = tuple(Fraction(rng.randint(lo, denominator), rng.randint(1, denominator)) for _ in range(k))
        if any(w):
            return w


def random_norm_spec(rng: random.Random) -> str:
    return rng.choice(("inf", "cornered:1", "cornered:2", "cornered:7/2", "lp:1", "lp:2", "lp:3"))


def random_digraph(rng: random.Random, *, n: int | None = None, max_nodes: int = 25, k: int = 2,
                   max_cost: int = 50, density: float | None = None):
    """Random digraph with a guaranteed source-target path."""
    from .fptas import GraphInstance

    if n is None:
        n = rng.randint(2, max_nodes)
    if density is None:
        density = rng.uniform(1.5, 3.0) / max(1, n - 1)
    edges = []
    order = list(range(1, n - 1))
    rng.shuffle(order)
    chain = [0] + order[: rng.randint(0, len(order))] + [n - 1]
    for u, v in zip(chain, chain[1:]):
        edges.append((u, v, tuple(rng.randint(0, max_cost) for _ in range(k))))
    for u in range(n):
        for v in range(n):
            if u != v and rng.random() < density:
                edges.append((u, v, tuple(rng.randint(0, max_cost) for _ in range(k))))
    return GraphInstance(n, edges, 0, n - 1, k)


def random_covering(rng: random.Random, *, max_elements: int = 10, max_sets: int = 8, k: int = 2,
                    max_cost: int = 10):
    """Random set-cover instance in which every element is covered."""
    from .lp import CoveringInstance

    m = rng.randint(1, max_elements)
    s = rng.randint(1, max_sets)
    sets = [set() for _ in range(s)]
    for e in range(m):
        sets[rng.randrange(s)].add(e)
    for members in sets:
        for e in range(m):
            if rng.random() < 0.3:
                members.add(e)
    sets = [m_ for m_ in sets if m_] or [set(range(m))]
    costs = [tuple(rng.randint(1, max_cost) for _ in range(k)) for _ in sets]
    return CoveringInstance(m, [tuple(sorted(x)) for x in sets], costs)


def random_polygon(rng: random.Random, *, max_rows: int = 5, max_coef: int = 6, k: int = 2):
    """Bounded 2-variable polyhedron inside a box, with a cost matrix ``C >= 0``.

    Random rows may make the polyhedron empty; callers handle that case.
    """
    from .lp import Polyhedron

    rows = []
    box = rng.randint(2, 10)
    rows.append(((1, 0), "<=", box))
    rows.append(((0, 1), "<=", box))
    for _ in range(rng.randint(1, max_rows)):
        a = (rng.randint(0, max_coef), rng.randint(0, max_coef))
        if a == (0, 0):
            continue
        rel = rng.choice(("<=", ">=", ">="))
        b = rng.randint(0, (a[0] + a[1]) * box)
        rows.append((a, rel, b))
    poly = Polyhedron(2, rows)
    C = [tuple(rng.randint(0, max_coef) for _ in range(2)) for _ in range(k)]
    return poly, C


def subsample(rng: random.Random, seq: Sequence, n: int) -> list:
    seq = list(seq)
    if len(seq) <= n:
        return seq
    return rng.sample(seq, n)
