import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from refpoint.core import (
    Norm,
    NormKind,
    NoneBelow,
    ObjectiveVector,
    ReferenceContext,
    Witness,
    compare_norm,
    leq,
    ref_objective,
)
from refpoint.explicit import (
    ExactGapOracle,
    ExplicitInstance,
    brute_cp_optimum,
    brute_rp_optimum,
    brute_weighted_sum,
    exact_pareto_set,
    ideal_point,
)
from refpoint.generators import random_approx_pareto, random_explicit
from refpoint.reductions import (
    ApproxParetoSet,
    ContractViolation,
    CPApproxSolver,
    RPApproxSolver,
    WSApproxSolver,
    approx_cp_via_pareto,
    coverage_factor,
    epsilon_pareto_via_gap,
    fptas_equivalence_delta,
    gap_beta,
    gap_via_cp,
    gap_via_rp_inf,
    gap_via_rp_pnorm,
    geometric_grid,
    lp_uniqueness_threshold,
    pnorm_gap_exponent,
    rp_via_weighted_sum,
    select_rp_from_pareto,
    weight_for_pareto_point,
)

ONES = (1, 1)


def exact_solver():
    return RPApproxSolver(lambda inst, ctx: brute_rp_optimum(inst, ctx)[0], 1)


def exact_cp_solver(factor_squared=1):
    return CPApproxSolver(lambda inst, norm: brute_cp_optimum(inst, norm)[0], factor_squared)


# Pareto set -> RP / CP --------------------------------------------------------


def test_select_from_exact_pareto_set(routes):
    approx = ApproxParetoSet(1, exact_pareto_set(routes))
    assert select_rp_from_pareto(approx, ReferenceContext((1, 1), Norm.infinity(ONES))) == (6, 6)


def test_select_singleton_and_factor():
    assert select_rp_from_pareto(ApproxParetoSet(2, [(4, 4)]), ReferenceContext((0, 0), Norm.infinity(ONES))) == (4, 4)
    inst = ExplicitInstance([(1, 1), (2, 2)])
    approx = ApproxParetoSet(2, [(2, 2)])
    assert approx.is_valid_for(inst)
    ctx = ReferenceContext((0, 0), Norm.infinity(ONES))
    chosen = select_rp_from_pareto(approx, ctx)
    assert ref_objective(ctx, chosen) <= 2 * brute_rp_optimum(inst, ctx)[1].const


def test_select_rejects_empty():
    with pytest.raises(ValueError):
        select_rp_from_pareto(ApproxParetoSet(2, []), ReferenceContext((0, 0), Norm.infinity(ONES)))


def test_approx_cp_examples(routes):
    yr, point = approx_cp_via_pareto(ApproxParetoSet(1, exact_pareto_set(routes)), Norm.infinity(ONES))
    assert yr == (1, 1) and point == (6, 6)
    yr, _ = approx_cp_via_pareto(ApproxParetoSet(2, [(2, 2), (10, 1), (1, 10)]), Norm.infinity(ONES))
    assert yr == (1, 1)
    yr, point = approx_cp_via_pareto(ApproxParetoSet(2, [(4, 4)]), Norm.infinity(ONES))
    assert yr == (2, 2) and point == (4, 4)


@given(st.integers(0, 10_000), st.sampled_from([Fraction(11, 10), Fraction(3, 2), Fraction(2), Fraction(3)]),
       st.sampled_from(["inf", "cornered:2", "lp:2", "lp:3/2"]))
@settings(max_examples=60, deadline=None)
def test_pareto_selection_factors(seed, alpha, spec):
    rng = random.Random(seed)
    inst = random_explicit(rng, k=rng.choice((2, 3)), max_points=30, max_bound=40)
    approx = ApproxParetoSet(alpha, random_approx_pareto(rng, inst, alpha))
    assert approx.is_valid_for(inst)
    norm = Norm.parse(spec, [rng.randint(1, 4) for _ in range(inst.k)])
    ideal = ideal_point(inst)
    ctx = ReferenceContext([rng.randint(0, v) for v in ideal], norm)
    chosen = select_rp_from_pareto(approx, ctx)
    assert ref_objective(ctx, chosen) <= brute_rp_optimum(inst, ctx)[1] * alpha
    yr, cp_point = approx_cp_via_pareto(approx, norm)
    assert leq(yr, ideal) and leq(ideal, [alpha * v for v in yr])
    cp_val = ref_objective(ReferenceContext(ideal, norm), cp_point)
    assert cp_val <= brute_cp_optimum(inst, norm)[1] * (alpha * alpha)


# weighted sum -----------------------------------------------------------------


def test_weighted_sum_example(routes):
    ws = WSApproxSolver(lambda inst, lam: brute_weighted_sum(inst, lam), 1)
    ctx = ReferenceContext((1, 1), Norm.infinity(ONES))
    point = rp_via_weighted_sum(routes, ctx, ws)
    assert sum(point) == 11
    assert ref_objective(ctx, point).const == 10 <= 2 * 6


@given(st.integers(0, 10_000))
@settings(max_examples=60, deadline=None)
def test_weighted_sum_factor_k(seed):
    rng = random.Random(seed)
    inst = random_explicit(rng, k=rng.choice((2, 3)), max_points=30, max_bound=40)
    lam = [Fraction(rng.randint(1, 9), rng.randint(1, 4)) for _ in range(inst.k)]
    ctx = ReferenceContext([rng.randint(0, v) for v in ideal_point(inst)], Norm.infinity(lam))
    ws = brute_weighted_sum(inst, lam)
    assert ref_objective(ctx, ws) <= brute_rp_optimum(inst, ctx)[1] * inst.k


# weights singling out a Pareto point ------------------------------------------


def test_weight_example_cornered():
    inst = ExplicitInstance([(2, 1), (1, 2)])
    wc = weight_for_pareto_point(inst, (2, 1), (0, 0), NormKind.CORNERED)
    assert wc.weights == (Fraction(1, 2), Fraction(1))
    assert wc.p_threshold == 4 and wc.p == 5
    norm = wc.norm()
    assert compare_norm(norm, (2, 1), (1, 2)).sign < 0


def test_weight_on_tight_coordinate():
    inst = ExplicitInstance([(1, 3), (2, 1), (3, 0)])
    wc = weight_for_pareto_point(inst, (1, 3), (1, 0), NormKind.CORNERED)
    assert wc.weights[0] == 3


def test_weight_single_criterion():
    inst = ExplicitInstance([(3,), (5,)])
    wc = weight_for_pareto_point(inst, (3,), (1,), NormKind.LP)
    assert wc.weights == (Fraction(1, 2),)
    assert wc.norm()((2,)).const == 1


def test_weight_rejects_dominated_point(routes):
    with pytest.raises(ValueError):
        weight_for_pareto_point(ExplicitInstance([(1, 1), (2, 2)]), (2, 2), (0, 0), "cornered")


def test_lp_threshold_values():
    # smallest t with (1 + 1/M)^t >= k
    assert lp_uniqueness_threshold(2, 10) == 8
    assert lp_uniqueness_threshold(1, 10) == 0
    for k, M in [(2, 20), (3, 7), (2, 1)]:
        t = lp_uniqueness_threshold(k, M)
        assert (1 + Fraction(1, M)) ** t >= k > (1 + Fraction(1, M)) ** (t - 1)


@given(st.integers(0, 10_000), st.sampled_from([NormKind.CORNERED, NormKind.LP]))
@settings(max_examples=40, deadline=None)
def test_weights_make_unique_minimizer(seed, kind):
    rng = random.Random(seed)
    inst = random_explicit(rng, k=2, max_points=25, max_bound=20)
    for y in exact_pareto_set(inst):
        yr = [rng.randint(0, v) for v in ideal_point(inst)]
        norm = weight_for_pareto_point(inst, y, yr, kind).norm()
        dy = [a - b for a, b in zip(y, yr)]
        for z in inst.points:
            if z != y:
                assert compare_norm(norm, dy, [a - b for a, b in zip(z, yr)]).sign < 0


# Gap via RP ---------------------------------------------------------------------


def test_gap_beta_values():
    assert gap_beta(2) == Fraction(4, 3)
    assert gap_beta(Fraction(11, 10)) == Fraction(121, 120)
    assert gap_beta(10) == Fraction(100, 19)
    with pytest.raises(ValueError):
        gap_beta(1)


def test_gap_inf_examples(routes):
    provider = lambda _inst: (1, 1)  # noqa: E731
    assert gap_via_rp_inf(routes, (7, 7), 2, provider, exact_solver()) == Witness(ObjectiveVector((6, 6)))
    assert isinstance(gap_via_rp_inf(routes, (2, 2), 2, provider, exact_solver()), NoneBelow)
    origin = lambda _inst: (0, 0)  # noqa: E731
    ans = gap_via_rp_inf(ExplicitInstance([(0, 4), (3, 3)]), (0, 5), 2, origin, exact_solver())
    assert ans == Witness(ObjectiveVector((0, 4)))


def test_gap_rejects_solver_with_large_factor(routes):
    bad = RPApproxSolver(lambda inst, ctx: brute_rp_optimum(inst, ctx)[0], Fraction(3, 2))
    with pytest.raises(ValueError):
        gap_via_rp_inf(routes, (7, 7), 2, lambda _i: (1, 1), bad)


def test_gap_detects_contract_violation(routes):
    liar = RPApproxSolver(lambda inst, ctx: ObjectiveVector((0, 0)), 1)
    with pytest.raises(ContractViolation):
        gap_via_rp_inf(routes, (7, 7), 2, lambda _i: (1, 1), liar)


def test_pnorm_exponent():
    assert pnorm_gap_exponent(2, 10, 1) == 40
    # first term log 2 / log(21/20) is about 14.2
    assert lp_uniqueness_threshold(2, 20) == math.ceil(math.log(2) / math.log(21 / 20))
    assert pnorm_gap_exponent(3, 1, 1) == max(6, lp_uniqueness_threshold(3, 2))


@pytest.mark.parametrize("kind", ["cornered", "lp"])
def test_gap_pnorm_matches_inf(routes, kind):
    provider = lambda _inst: (1, 1)  # noqa: E731
    for y in [(7, 7), (2, 2), (10, 1), (20, 2), (3, 12)]:
        a = gap_via_rp_inf(routes, y, 2, provider, exact_solver())
        b = gap_via_rp_pnorm(routes, y, 2, provider, exact_solver(), kind, bound=routes.bound)
        assert type(a) is type(b)


def test_gap_via_cp_examples(routes):
    ans = gap_via_cp(routes, (7, 7), 2, exact_cp_solver())
    assert ans == Witness(ObjectiveVector((6, 6)))
    assert isinstance(gap_via_cp(routes, (2, 2), 2, exact_cp_solver()), NoneBelow)
    # boundary: beta^2 = 4/3 = alpha^2 / (2 alpha - 1) for alpha = 2
    gap_via_cp(routes, (7, 7), 2, exact_cp_solver(Fraction(4, 3)))
    with pytest.raises(ValueError):
        gap_via_cp(routes, (7, 7), 2, exact_cp_solver(Fraction(3, 2)))


@given(st.integers(0, 10_000), st.sampled_from([Fraction(11, 10), Fraction(2), Fraction(10)]),
       st.sampled_from(["inf", "cornered", "lp"]))
@settings(max_examples=60, deadline=None)
def test_gap_soundness_property(seed, alpha, variant):
    rng = random.Random(seed)
    inst = random_explicit(rng, k=rng.choice((2, 3)), max_points=20, max_bound=30)
    ideal = ideal_point(inst)
    for _ in range(5):
        y = tuple(Fraction(rng.randint(0, 4 * 30), rng.randint(1, 3)) for _ in range(inst.k))
        if variant == "inf":
            ans = gap_via_rp_inf(inst, y, alpha, lambda _i: ideal, exact_solver())
        else:
            ans = gap_via_rp_pnorm(inst, y, alpha, lambda _i: ideal, exact_solver(), variant, bound=inst.bound)
        if isinstance(ans, Witness):
            assert ans.point in inst and leq(ans.point, y)
        else:
            assert not any(leq(p, [v / alpha for v in y]) for p in inst.points)


# grid ----------------------------------------------------------------------------


def test_geometric_grid():
    assert geometric_grid(2, 8) == [0, 1, 2, 4, 8]
    assert geometric_grid(2, 9, include_zero=False) == [1, 2, 4, 8, 16]


def test_grid_examples(routes):
    result = epsilon_pareto_via_gap(ExactGapOracle(routes, Fraction(11, 10)), Fraction(11, 10), k=2, bound=10)
    assert result.alpha == Fraction(121, 100)
    assert coverage_factor(result.points, exact_pareto_set(routes)) <= Fraction(121, 100)
    single = ExplicitInstance([(3, 7)])
    assert epsilon_pareto_via_gap(ExactGapOracle(single, 2), 2, k=2, bound=7).points == ((3, 7),)
    one = ExplicitInstance([(1, 1)])
    assert epsilon_pareto_via_gap(ExactGapOracle(one, 2), 2, k=2, bound=1).points == ((1, 1),)


def test_grid_rejects_bad_witness():
    def liar(y):
        return Witness(ObjectiveVector((100, 100)))

    with pytest.raises(ContractViolation):
        epsilon_pareto_via_gap(liar, 2, k=2, bound=4)


@given(st.integers(0, 10_000), st.sampled_from([Fraction(11, 10), Fraction(3, 2), Fraction(2)]))
@settings(max_examples=40, deadline=None)
def test_grid_coverage_property(seed, alpha):
    rng = random.Random(seed)
    inst = random_explicit(rng, k=2, max_points=30, max_bound=50)
    result = epsilon_pareto_via_gap(ExactGapOracle(inst, alpha), alpha, k=2, bound=inst.bound)
    assert all(p in inst for p in result.points)
    assert coverage_factor(result.points, exact_pareto_set(inst)) <= alpha * alpha


def test_equivalence_cycle_closes(routes):
    """Pareto -> RP -> Gap -> Pareto with factor alpha^2 per loop."""
    alpha = Fraction(2)
    pareto = ApproxParetoSet(1, exact_pareto_set(routes))
    rp = RPApproxSolver(lambda inst, ctx: select_rp_from_pareto(pareto, ctx), 1)
    ideal = ideal_point(routes)
    result = epsilon_pareto_via_gap(lambda y: gap_via_rp_inf(routes, y, alpha, lambda _i: ideal, rp),
                                    alpha, k=2, bound=10)
    assert coverage_factor(result.points, exact_pareto_set(routes)) <= alpha * alpha


# FPTAS delta ----------------------------------------------------------------------


def test_fptas_delta():
    for eps in (Fraction(1), Fraction(3), Fraction(1, 2), Fraction(1, 10), Fraction(1, 1000)):
        d = fptas_equivalence_delta(eps)
        assert 0 < d <= eps
        assert (1 + d) ** 2 * (2 * eps + 1) <= (1 + eps) ** 2
        grown = d + Fraction(1, 2**60)
        assert (1 + grown) ** 2 * (2 * eps + 1) > (1 + eps) ** 2
    assert abs(float(fptas_equivalence_delta(1)) - (math.sqrt(4 / 3) - 1)) < 1e-15
    assert abs(float(fptas_equivalence_delta(3)) - (math.sqrt(16 / 7) - 1)) < 1e-15
