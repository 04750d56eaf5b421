import json
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from refpoint.core import (
    InfeasibleReferencePoint,
    Norm,
    ObjectiveVector,
    ReferenceContext,
    dominates,
    leq,
    ref_objective,
    Sense,
)
from refpoint.fptas import (
    GraphInstance,
    NoPathError,
    bounds_via_weighted_sum,
    brute_sp_rp,
    enumerate_paths,
    epsilon_prime,
    fptas_cp_sp,
    fptas_rp_sp,
    graph_ideal_point,
    pseudopoly_sp_rp,
    scale_instance,
    scaled_ideal_sandwich,
)
from refpoint.generators import random_digraph

ONES = (1, 1)


def parallel():
    return GraphInstance(2, [(0, 1, (10, 1)), (0, 1, (1, 10)), (0, 1, (6, 6))], 0, 1)


def diamond():
    return GraphInstance(4, [(0, 1, (1, 5)), (0, 2, (4, 1)), (1, 3, (2, 2)), (2, 3, (1, 3)),
                             (1, 2, (0, 1)), (0, 3, (9, 9))], 0, 3)


# bounds ---------------------------------------------------------------------------


def test_bounds_single_edge():
    g = GraphInstance(2, [(0, 1, (3, 4))], 0, 1)
    b = bounds_via_weighted_sum(g, ReferenceContext((0, 0), Norm.infinity(ONES)))
    assert b.U == 4 and b.L == 2
    assert b.L <= 4 <= 2 * b.L


def test_bounds_parallel_edges():
    b = bounds_via_weighted_sum(parallel(), ReferenceContext((1, 1), Norm.infinity(ONES)))
    assert b.U == 10 and b.L == 5
    assert b.L <= 6 <= b.U


def test_bounds_single_criterion():
    g = GraphInstance(3, [(0, 1, (2,)), (1, 2, (3,)), (0, 2, (7,))], 0, 2)
    ctx = ReferenceContext((1,), Norm.infinity((1,)))
    b = bounds_via_weighted_sum(g, ctx)
    assert b.L == b.U == pseudopoly_sp_rp(g, ctx).value.const == 1 + 4


def test_unreachable_target():
    g = GraphInstance(3, [(0, 1, (1, 1))], 0, 2)
    ctx = ReferenceContext((0, 0), Norm.infinity(ONES))
    with pytest.raises(NoPathError):
        pseudopoly_sp_rp(g, ctx)
    with pytest.raises(NoPathError):
        bounds_via_weighted_sum(g, ctx)


# exact label-correcting algorithm ------------------------------------------------


def test_pseudopoly_parallel():
    sol = pseudopoly_sp_rp(parallel(), ReferenceContext((1, 1), Norm.infinity(ONES)))
    assert sol.cost == (6, 6) and sol.value.const == 6


def test_pseudopoly_single_path():
    g = GraphInstance(3, [(0, 1, (1, 2)), (1, 2, (3, 1))], 0, 2)
    sol = pseudopoly_sp_rp(g, ReferenceContext((0, 0), Norm.cornered(2, ONES)))
    assert sol.nodes == (0, 1, 2) and sol.cost == (4, 3)


def test_diamond_matches_enumeration():
    g = diamond()
    assert len(list(enumerate_paths(g))) == 4
    for yr in [(0, 0), (3, 3), (1, 2)]:
        for norm in [Norm.infinity(ONES), Norm.cornered(1, (1, 2)), Norm.cornered(5, (3, 1))]:
            ctx = ReferenceContext(yr, norm)
            assert pseudopoly_sp_rp(g, ctx).value == brute_sp_rp(g, ctx).value


@given(st.integers(0, 100_000))
@settings(max_examples=60, deadline=None)
def test_label_dp_exact_and_prune_safe(seed):
    rng = random.Random(seed)
    g = random_digraph(rng, max_nodes=7, density=rng.choice((0.2, 0.4, 0.7)))
    ideal = graph_ideal_point(g)
    norm = rng.choice([Norm.infinity((rng.randint(1, 3), rng.randint(1, 3))), Norm.cornered(rng.randint(1, 4), ONES)])
    ctx = ReferenceContext([rng.randint(0, v) for v in ideal], norm)
    b = bounds_via_weighted_sum(g, ctx)
    pruned = pseudopoly_sp_rp(g, ctx, b.U)
    plain = pseudopoly_sp_rp(g, ctx, b.U, prune=False)
    brute = brute_sp_rp(g, ctx)
    assert pruned.value == brute.value == plain.value
    assert pruned.cost == plain.cost
    assert b.L <= pruned.value.const <= b.U
    assert not any(dominates(c, pruned.cost, Sense.MIN) for _, c in enumerate_paths(g))


# scaling ---------------------------------------------------------------------------


def test_scale_factor_arithmetic():
    g = GraphInstance(3, [(0, 1, (7, 7)), (1, 2, (1, 1))], 0, 2)
    s = scale_instance(g, (0, 0), Fraction(1, 2), L=4)
    assert s.scale == Fraction(9, 2)
    assert s.graph.edges[0][2] == (31, 31)
    assert s.refpoint == (0, 0)
    assert s.sandwich_holds()


def test_epsilon_prime():
    assert epsilon_prime(1, Norm.cornered(2, ONES)) == Fraction(1, 2)
    assert epsilon_prime(1, Norm.infinity(ONES)) == 1
    assert epsilon_prime(Fraction(1, 2), Norm.cornered(1, (1, 1, 1))) == Fraction(1, 8)


def test_scaled_refpoint_is_clipped_to_scaled_ideal():
    # unit costs on a 2-edge path, scale 3/2: floor(3/2 * 2) = 3 exceeds the
    # scaled ideal 2, so the unclipped reference point would be infeasible
    g = GraphInstance(3, [(0, 1, (1, 1)), (1, 2, (1, 1))], 0, 2)
    s = scale_instance(g, (2, 2), 3, L=2)
    assert s.scale == Fraction(3, 2)
    assert s.raw_refpoint == (3, 3)
    assert s.ideal == (2, 2)
    assert s.refpoint == (2, 2)
    assert leq(s.refpoint, graph_ideal_point(s.graph))


# FPTAS -------------------------------------------------------------------------------


def test_fptas_parallel_edges():
    ctx = ReferenceContext((1, 1), Norm.infinity(ONES))
    assert fptas_rp_sp(parallel(), ctx, Fraction(1, 10)).solution.cost == (6, 6)
    assert fptas_cp_sp(parallel(), Norm.infinity(ONES), Fraction(1, 10)).solution.cost == (6, 6)


def test_fptas_huge_epsilon():
    g = diamond()
    ctx = ReferenceContext((0, 0), Norm.infinity(ONES))
    res = fptas_rp_sp(g, ctx, 10**6)
    assert res.value <= pseudopoly_sp_rp(g, ctx).value * (1 + 10**6)


def test_fptas_cp_single_path():
    g = GraphInstance(3, [(0, 1, (1, 2)), (1, 2, (3, 1))], 0, 2)
    res = fptas_cp_sp(g, Norm.cornered(2, ONES), Fraction(1, 2))
    assert res.solution.cost == (4, 3)


def test_fptas_rejects_infeasible_and_bad_eps():
    ctx = ReferenceContext((5, 5), Norm.infinity(ONES))
    with pytest.raises(InfeasibleReferencePoint):
        fptas_rp_sp(parallel(), ctx, Fraction(1, 2))
    with pytest.raises(ValueError):
        fptas_rp_sp(parallel(), ReferenceContext((0, 0), Norm.infinity(ONES)), 0)


def test_fptas_zero_optimum():
    g = GraphInstance(2, [(0, 1, (0, 0)), (0, 1, (3, 1))], 0, 1)
    res = fptas_rp_sp(g, ReferenceContext((0, 0), Norm.infinity(ONES)), Fraction(1, 2))
    assert res.value.const == 0


@given(st.integers(0, 100_000), st.sampled_from([Fraction(1, 2), Fraction(1, 10), Fraction(1, 50)]))
@settings(max_examples=40, deadline=None)
def test_fptas_guarantee_property(seed, eps):
    rng = random.Random(seed)
    g = random_digraph(rng, max_nodes=12)
    ideal = graph_ideal_point(g)
    p = rng.choice([None, 1, 3])
    w = (rng.randint(1, 3), rng.randint(1, 3))
    norm = Norm.infinity(w) if p is None else Norm.cornered(p, w)
    ctx = ReferenceContext([rng.randint(0, v) for v in ideal], norm)
    opt = pseudopoly_sp_rp(g, ctx).value
    res = fptas_rp_sp(g, ctx, eps)
    assert res.value <= opt * (1 + eps)
    assert res.value == ref_objective(ctx, res.solution.cost)
    if res.scaled is not None:
        assert res.scaled.sandwich_holds()
        assert leq(res.scaled.refpoint, graph_ideal_point(res.scaled.graph))
    cp = fptas_cp_sp(g, norm, eps)
    cp_opt = pseudopoly_sp_rp(g, ReferenceContext(ideal, norm)).value
    assert cp.value <= cp_opt * (1 + eps)
    if cp.scaled is not None:
        assert scaled_ideal_sandwich(cp.scaled, ideal)


def test_graph_json_roundtrip():
    g = diamond()
    doc = json.loads(json.dumps(g.to_json()))
    assert doc["type"] == "graph" and doc["s"] == 0 and doc["t"] == 3
    assert GraphInstance.from_json(doc) == g
    assert GraphInstance.from_json({"n": 2, "edges": [[0, 1, [1, 2]]]}).target == 1


def test_graph_validation():
    with pytest.raises(ValueError):
        GraphInstance(2, [(0, 1, (1, 2))], 0, 0)
    with pytest.raises(ValueError):
        GraphInstance(2, [(0, 1, (Fraction(1, 2), 2))], 0, 1)
    with pytest.raises(ValueError):
        GraphInstance(2, [(0, 5, (1, 2))], 0, 1)


def test_path_solution_json():
    sol = pseudopoly_sp_rp(parallel(), ReferenceContext((1, 1), Norm.infinity(ONES)))
    doc = sol.to_json()
    assert doc["objective_vector"] == [6, 6] and doc["r_value"] == "6" and doc["path"] == [0, 1]
    assert ObjectiveVector(doc["objective_vector"]) == sol.cost
