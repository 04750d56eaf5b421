import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from refpoint.core import NoneAbove, Norm, ObjectiveVector, ReferenceContext, Sense, Witness, leq
from refpoint.explicit import ExplicitInstance, brute_weighted_sum, exact_pareto_set, ideal_point
from refpoint.generators import random_approx_pareto, random_explicit, random_norm_spec, random_refpoint, random_weights
from refpoint.maximization import (
    brute_max_rp,
    cp_counterexample,
    cp_indistinguishability_check,
    exact_max_rp_solver,
    max_cp_via_pareto,
    max_gap_via_rp,
    max_ref_objective,
    max_rp_via_pareto,
    max_select_from_pareto,
    ws_counterexample,
    ws_counterexample_check,
)
from refpoint.reductions import ApproxParetoSet, RPApproxSolver

ONES = (1, 1)
FIXTURE = ExplicitInstance([(1, 1), (3, 0), (0, 3)])


def max_ctx(yr, norm=None):
    return ReferenceContext(yr, norm or Norm.infinity([1] * len(yr)), Sense.MAX)


# objective -------------------------------------------------------------------------


def test_max_objective_examples():
    ctx = max_ctx((3, 3))
    assert max_ref_objective(ctx, (1, 1)) == 1
    assert max_ref_objective(ctx, (3, 3)) == 3
    assert [max_ref_objective(ctx, p) for p in [(1, 1), (3, 0), (0, 3)]] == [1, 0, 0]
    assert brute_max_rp(FIXTURE, ctx)[0] == (1, 1)


def test_max_objective_may_be_negative():
    # points above the refpoint are penalized through absolute differences
    assert max_ref_objective(max_ctx((1, 1)), (5, 1)) == -3


def test_max_selection_examples():
    ctx = max_ctx((3, 3))
    exact = ApproxParetoSet(1, exact_pareto_set(FIXTURE, Sense.MAX), sense=Sense.MAX)
    assert max_select_from_pareto(exact, ctx) == (1, 1)
    assert max_rp_via_pareto(exact, ctx) == (1, 1)
    assert max_select_from_pareto([(2, 2)], ctx) == (2, 2)
    with pytest.raises(ValueError):
        max_select_from_pareto([], ctx)


def test_max_selection_on_valid_two_set():
    # (3,0) and (0,3) cannot cover (1,1) within factor 2, so add (1,1) back
    inst = ExplicitInstance([(1, 1), (3, 0), (0, 3), (2, 1)])
    approx = ApproxParetoSet(2, [(2, 1), (0, 3)], sense=Sense.MAX)
    assert approx.is_valid_for(inst)
    ctx = max_ctx((3, 3))
    chosen = max_select_from_pareto(approx, ctx)
    opt = brute_max_rp(inst, ctx)[1]
    assert chosen == (2, 1) and 2 * max_ref_objective(ctx, chosen) >= opt


def test_max_cp_exact_and_singleton():
    exact = ApproxParetoSet(1, exact_pareto_set(FIXTURE, Sense.MAX), sense=Sense.MAX)
    yr, chosen = max_cp_via_pareto(exact, Norm.infinity(ONES))
    assert yr == (3, 3) and chosen == (1, 1)
    yr, chosen = max_cp_via_pareto(ApproxParetoSet(1, [(4, 5)], sense=Sense.MAX), Norm.infinity(ONES))
    assert yr == (4, 5) and chosen == (4, 5)


@pytest.mark.xfail(strict=True, reason="no alpha^2 guarantee for the max compromise construction")
def test_max_cp_alpha_squared_counterexample():
    inst = ExplicitInstance([(0, 0, 2), (0, 1, 1), (0, 2, 0), (1, 1, 0), (1, 2, 0), (2, 0, 0), (2, 1, 0), (2, 2, 0)])
    norm = Norm.infinity((Fraction(3, 5), Fraction(1, 5), 1))
    approx = ApproxParetoSet(4, [(0, 1, 1), (2, 1, 0)], sense=Sense.MAX)
    assert approx.is_valid_for(inst)
    _, chosen = max_cp_via_pareto(approx, norm)
    ideal_ctx = max_ctx(ideal_point(inst, Sense.MAX), norm)
    _, opt = brute_max_rp(inst, ideal_ctx)
    assert opt == Fraction(4, 5)
    assert 16 * max_ref_objective(ideal_ctx, chosen) >= opt


@given(st.integers(0, 100_000))
@settings(max_examples=80, deadline=None)
def test_max_selection_bound(seed):
    rng = random.Random(seed)
    inst = random_explicit(rng, max_points=20, max_bound=20)
    alpha = rng.choice((Fraction(11, 10), Fraction(2), Fraction(3)))
    approx = ApproxParetoSet(alpha, random_approx_pareto(rng, inst, alpha, Sense.MAX), sense=Sense.MAX)
    assert approx.is_valid_for(inst)
    ctx = max_ctx(random_refpoint(rng, inst, Sense.MAX), Norm.parse(random_norm_spec(rng), random_weights(rng, inst.k)))
    chosen = max_select_from_pareto(approx, ctx)
    _, opt = brute_max_rp(inst, ctx)
    assert max_ref_objective(ctx, chosen) * alpha >= opt


# Gap ---------------------------------------------------------------------------------


def test_max_gap_examples():
    solver = exact_max_rp_solver()
    ans = max_gap_via_rp(FIXTURE, (1, 1), 2, solver, 3)
    assert isinstance(ans, Witness) and ans.point == (1, 1)
    ans = max_gap_via_rp(FIXTURE, (4, 4), 2, solver, 3)
    assert isinstance(ans, NoneAbove)
    assert not any(leq((8, 8), p) for p in FIXTURE.points)


def test_max_gap_zero_coordinate():
    seen = []

    def spy(inst, ctx):
        seen.append(ctx)
        return brute_max_rp(inst, ctx)[0]

    ans = max_gap_via_rp(FIXTURE, (2, 0), 2, RPApproxSolver(spy, 1), 3)
    assert seen[0].norm.weights == (Fraction(1, 2), 0)
    assert seen[0].refpoint == (3, 0)
    assert isinstance(ans, Witness) and ans.point == (3, 0)


def test_max_gap_validation():
    solver = exact_max_rp_solver()
    with pytest.raises(ValueError):
        max_gap_via_rp(FIXTURE, (0, 0), 2, solver, 3)
    with pytest.raises(ValueError):
        max_gap_via_rp(FIXTURE, (1, 1), 1, solver, 3)
    with pytest.raises(ValueError):
        max_gap_via_rp(FIXTURE, (1, 1), 2, RPApproxSolver(solver.solve, 3), 3)


@given(st.integers(0, 100_000))
@settings(max_examples=80, deadline=None)
def test_max_gap_sound(seed):
    rng = random.Random(seed)
    inst = random_explicit(rng, max_points=20, max_bound=20)
    alpha = rng.choice((Fraction(11, 10), Fraction(2), Fraction(3)))
    y = tuple(rng.randint(0, inst.bound) for _ in range(inst.k))
    if not any(y):
        y = (1,) + y[1:]
    ans = max_gap_via_rp(inst, y, alpha, exact_max_rp_solver(), inst.bound)
    if isinstance(ans, Witness):
        assert ans.point in inst and leq(y, ans.point)
    else:
        assert isinstance(ans, NoneAbove)
        assert not any(leq([alpha * v for v in y], p) for p in inst.points)


# counterexamples ---------------------------------------------------------------------


def test_ws_fixture():
    full, reduced = ws_counterexample()
    assert full.points == ((0, 3), (1, 1), (3, 0))
    assert reduced.points == ((0, 3), (3, 0))
    assert brute_weighted_sum(full, (1, 0), Sense.MAX) == (3, 0)
    assert brute_weighted_sum(full, (1, 1), Sense.MAX) in {(3, 0), (0, 3)}


def test_ws_check_exact():
    report = ws_counterexample_check(grid=100)
    assert report["returned_11"] == 0
    assert report["distinguishing_weights"] == 0
    assert report["never_optimal"]
    assert len(report["rows"]) == 100


def test_ws_check_with_custom_solver():
    report = ws_counterexample_check(lambda inst, lam: (1, 1) if (1, 1) in inst else (3, 0), grid=10)
    assert report["returned_11"] == 10 and report["distinguishing_weights"] == 10


def test_cp_fixture_points():
    full, reduced = cp_counterexample(1000, Fraction(1, 2))
    a = Fraction(4, 9)
    assert set(full.points) == {(1, 1001), (a, 1000 + a), (1, 501), (1001, 0), (0, 2001)}
    assert set(reduced.points) == set(full.points) - {(1, 1001)}
    assert all(type(v) in (int, Fraction) for p in full.points for v in p)
    with pytest.raises(ValueError):
        cp_counterexample(10, 1)


def _row(report, lam):
    return next(r for r in report["rows"] if r["lambda"] == lam)


def test_cp_regimes_at_m1000():
    report = cp_indistinguishability_check(1000, Fraction(1, 2))
    assert report["y_required"] and report["regimes_hold"]
    assert report["analytic_bound"] == "5/3001"
    first = _row(report, ["1/3", "1"])
    assert first["regime"] == "y'" and first["r_y"] == "1001"
    # r(y') = 1000 + 4/9, so y' is within 5/9004 of y
    assert first["delta_regime_point"] == "5/9004"
    second = _row(report, ["1", "1/2"])
    assert second["regime"] == "y''" and second["r_y"] == "1" and second["delta_regime_point"] == "0"


def test_cp_delta_one_indistinguishable():
    assert cp_indistinguishability_check(1000, Fraction(1, 2), delta=1)["indistinguishable"]


def test_cp_check_rejects_small_m():
    with pytest.raises(ValueError):
        cp_indistinguishability_check(1, Fraction(1, 2))
