"""Randomized oracle-checked suites behind ``refpoint verify``.

Each suite draws seeded instances, runs an approximation algorithm next to
a brute-force oracle and records one row per check: the claimed factor, the
observed ratio and whether the claim held.  Rows are emitted as CSV; the
output depends only on the seed.
"""
from __future__ import annotations

import csv
import inspect
import io
import os
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .core import (
    NoneAbove,
    NoneBelow,
    Norm,
    NormKind,
    NormValue,
    ObjectiveVector,
    ReferenceContext,
    Sense,
    Witness,
    compare_norm,
    format_rational,
    leq,
    ref_objective,
)
from .explicit import (
    ExactGapOracle,
    ExplicitInstance,
    _best,
    brute_cp_optimum,
    brute_rp_optimum,
    brute_weighted_sum,
    exact_pareto_set,
    ideal_point,
)
from .generators import (
    corpus,
    random_approx_pareto,
    random_covering,
    random_digraph,
    random_norm_spec,
    random_polygon,
    random_refpoint,
    random_weights,
)
from .reductions import (
    ApproxParetoSet,
    RPApproxSolver,
    approx_cp_via_pareto,
    coverage_factor,
    epsilon_pareto_via_gap,
    gap_beta,
    gap_via_rp_inf,
    gap_via_rp_pnorm,
    select_rp_from_pareto,
    weight_for_pareto_point,
)

THREADS_ENV = "REFPOINT_THREADS"
SUITES = ("factors", "gap", "grid", "weights", "fptas", "lp", "max")
GROUPS = {"reductions": ("factors", "gap", "grid", "weights")}


@dataclass(frozen=True)
class Row:
    suite: str
    instance: str
    check: str
    claimed: str
    observed: str
    ok: bool


@dataclass
class Report:
    rows: list = field(default_factory=list)

    def add(self, suite, instance, check, claimed, observed, ok):
        self.rows.append(Row(suite, str(instance), check, _fmt(claimed), _fmt(observed), bool(ok)))

    def extend(self, other: "Report"):
        self.rows.extend(other.rows)

    @property
    def violations(self) -> list:
        return [r for r in self.rows if not r.ok]

    @property
    def ok(self) -> bool:
        return not self.violations

    def by_check(self) -> dict:
        out: dict = {}
        for r in self.rows:
            out.setdefault((r.suite, r.check), []).append(r)
        return out

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["suite", "instance", "check", "claimed_factor", "observed_ratio", "ok"])
        for r in self.rows:
            w.writerow([r.suite, r.instance, r.check, r.claimed, r.observed, "1" if r.ok else "0"])
        return buf.getvalue()

    def summary(self) -> str:
        lines = []
        for (suite, check), rows in self.by_check().items():
            bad = sum(not r.ok for r in rows)
            lines.append(f"{suite}/{check}: {len(rows)} checks, {bad} violations")
        return "\n".join(lines)


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, str):
        return x
    if isinstance(x, NormValue):
        if x.is_exact:
            return format_rational(x.const)
        lo, hi = x.enclosure(64)
        return f"{float((lo + hi) / 2):.12g}"
    if isinstance(x, float):
        return f"{x:.12g}"
    return format_rational(x)


def ratio(a, b):
    """``a / b`` for objective values; 1 when both vanish."""
    a, b = NormValue.of(a), NormValue.of(b)
    if a.is_exact and b.is_exact:
        if b.const == 0:
            return Fraction(1) if a.const == 0 else float("inf")
        return a.const / b.const
    lo_a, hi_a = a.enclosure(64)
    lo_b, hi_b = b.enclosure(64)
    mid_b = (lo_b + hi_b) / 2
    if mid_b == 0:
        return Fraction(1) if hi_a <= 0 else float("inf")
    return float((lo_a + hi_a) / 2 / mid_b)


def _threads() -> int:
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


def _map(fn: Callable, items: Sequence) -> list:
    """Order-preserving map, fanned out over threads when requested."""
    n = _threads()
    if n == 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))


def _merge(reports: Iterable[Report]) -> Report:
    out = Report()
    for r in reports:
        out.extend(r)
    return out


def exact_rp_solver() -> RPApproxSolver:
    return RPApproxSolver(lambda inst, ctx: brute_rp_optimum(inst, ctx)[0], 1)


def unchecked_rp_solver() -> RPApproxSolver:
    """Exact RP solver that does not insist on a feasible reference point."""
    return RPApproxSolver(lambda inst, ctx: _best(inst.points, ctx, Sense.MIN)[0], 1)


def worst_case_rp_solver(beta) -> RPApproxSolver:
    """A legal ``beta``-approximate RP solver that returns the worst allowed point.

    Among all points with ``r <= beta * OPT`` it picks one with the largest
    ``r`` (ties to the lexicographically largest), which stresses every
    reduction that relies only on the factor.
    """
    beta = Fraction(beta)

    def solve(inst, ctx):
        vals = [(ref_objective(ctx, y), y) for y in inst.points]
        opt = min(v for v, _ in vals)
        cap = opt * beta
        best = best_val = None
        for v, y in reversed(vals):
            if v <= cap and (best is None or v > best_val):
                best, best_val = y, v
        return best

    return RPApproxSolver(solve, beta)


# ---------------------------------------------------------------------------
# explicit-instance suites


def _reduction_checks(args) -> Report:
    idx, inst, seed, solver = args
    rng = random.Random(seed * 1_000_003 + idx)
    rep = Report()
    alpha = rng.choice((Fraction(11, 10), Fraction(3, 2), Fraction(2), Fraction(3)))
    approx = ApproxParetoSet(alpha, random_approx_pareto(rng, inst, alpha))
    yr = random_refpoint(rng, inst)
    spec = random_norm_spec(rng)
    norm = Norm.parse(spec, random_weights(rng, inst.k))
    ctx = ReferenceContext(yr, norm, verified=True)
    if solver is None:
        chosen = select_rp_from_pareto(approx, ctx)
    else:
        chosen = solver(inst, ctx)
    _, opt = brute_rp_optimum(inst, ctx)
    val = ref_objective(ctx, chosen)
    rep.add("factors", idx, f"pareto-to-rp[{spec}]", alpha, ratio(val, opt), val <= opt * alpha)

    yr_cp, chosen_cp = approx_cp_via_pareto(approx, norm)
    ideal = ideal_point(inst)
    ok_ref = leq(yr_cp, ideal) and leq(ideal, tuple(alpha * v for v in yr_cp))
    _, cp_opt = brute_cp_optimum(inst, norm)
    cp_val = ref_objective(ReferenceContext(ideal, norm), chosen_cp)
    rep.add("factors", idx, f"pareto-to-cp[{spec}]", alpha * alpha, ratio(cp_val, cp_opt),
            ok_ref and cp_val <= cp_opt * (alpha * alpha))

    lam = random_weights(rng, inst.k)
    ctx_inf = ReferenceContext(yr, Norm.infinity(lam), verified=True)
    ws = brute_weighted_sum(inst, lam)
    _, inf_opt = brute_rp_optimum(inst, ctx_inf)
    ws_val = ref_objective(ctx_inf, ws)
    rep.add("factors", idx, "weighted-sum-to-rp[inf]", inst.k, ratio(ws_val, inf_opt),
            ws_val <= inf_opt * inst.k)
    return rep


def suite_factors(seed: int = 0, size: int = 200, *, solver: RPApproxSolver | None = None) -> Report:
    """Factors of Pareto-set selection (``alpha``), compromise construction (``alpha^2``) and weighted sum (``k``).

    ``solver`` replaces the selection step (negative controls).
    """
    insts = corpus(seed, size)
    return _merge(_map(_reduction_checks, [(i, inst, seed, solver) for i, inst in enumerate(insts)]))


def _gap_queries(rng: random.Random, inst: ExplicitInstance, alpha, count: int) -> list:
    """Random queries plus queries just above and below ``alpha`` times instance points."""
    k = inst.k
    top = int(alpha * inst.bound) + 1
    qs = []
    for _ in range(count):
        qs.append(tuple(rng.randint(0, top) for _ in range(k)))
    for _ in range(count // 2):
        qs.append(tuple(Fraction(rng.randint(0, 4 * top), rng.randint(1, 4)) for _ in range(k)))
    for p in rng.sample(inst.points, min(len(inst.points), count // 2)):
        qs.append(tuple(alpha * v for v in p))
        qs.append(tuple(v for v in p))
        qs.append(tuple(max(Fraction(0), alpha * v - Fraction(1, 3)) for v in p))
    return qs


def check_gap_answer(inst: ExplicitInstance, y, alpha, ans) -> bool:
    if isinstance(ans, Witness):
        return ans.point in inst and leq(ans.point, y)
    if isinstance(ans, NoneBelow):
        cut = tuple(v / alpha for v in y)
        return not any(leq(p, cut) for p in inst.points)
    return False


def _gap_checks(args) -> Report:
    idx, inst, seed, alphas, count, variants = args
    rng = random.Random(seed * 7_000_003 + idx)
    rep = Report()
    ideal = ideal_point(inst)
    providers = {"ideal": lambda _i: ideal, "origin": lambda _i: (0,) * inst.k}
    for alpha in alphas:
        beta = gap_beta(alpha)
        solvers = {"exact": unchecked_rp_solver(), "beta": worst_case_rp_solver(beta)}
        queries = _gap_queries(rng, inst, alpha, count)
        for variant in variants:
            for sname, solver in solvers.items():
                pname = rng.choice(tuple(providers))
                bad = 0
                witnesses = 0
                for y in queries:
                    if variant == "inf":
                        ans = gap_via_rp_inf(inst, y, alpha, providers[pname], solver)
                    else:
                        ans = gap_via_rp_pnorm(inst, y, alpha, providers[pname], solver, variant, bound=inst.bound)
                    witnesses += isinstance(ans, Witness)
                    bad += not check_gap_answer(inst, y, alpha, ans)
                rep.add("gap", idx, f"gap[{variant},{sname},alpha={format_rational(alpha)}]",
                        "sound", f"{len(queries) - bad}/{len(queries)} sound, {witnesses} witnesses", bad == 0)
    return rep


def suite_gap(seed: int = 0, size: int = 200, *, alphas=(Fraction(11, 10), Fraction(2), Fraction(10)),
              queries: int = 12, variants=("inf", "cornered")) -> Report:
    """Gap answers through RP solvers, checked by enumeration.

    Solvers: the exact one, and a worst-case solver with factor exactly
    ``alpha^2 / (2 alpha - 1)``.
    """
    insts = corpus(seed, size)
    args = [(i, inst, seed, tuple(Fraction(a) for a in alphas), queries, variants) for i, inst in enumerate(insts)]
    return _merge(_map(_gap_checks, args))


def _grid_checks(args) -> Report:
    idx, inst, alphas = args
    rep = Report()
    pareto = exact_pareto_set(inst)
    for a in alphas:
        approx = epsilon_pareto_via_gap(ExactGapOracle(inst, a), a, k=inst.k, bound=inst.bound)
        ok = all(p in inst for p in approx.points)
        cov = coverage_factor(approx.points, pareto)
        rep.add("grid", idx, f"gap-grid[alpha={format_rational(a)}]", a * a, cov, ok and cov <= a * a)
    return rep


def suite_grid(seed: int = 0, size: int = 200, *, alphas=(Fraction(11, 10), Fraction(2))) -> Report:
    """Approximate Pareto sets from an exact Gap oracle on the geometric grid."""
    insts = corpus(seed, size)
    return _merge(_map(_grid_checks, [(i, inst, tuple(Fraction(a) for a in alphas)) for i, inst in enumerate(insts)]))


def _weight_checks(args) -> Report:
    idx, inst, seed = args
    rng = random.Random(seed * 3_000_017 + idx)
    rep = Report()
    for kind in (NormKind.CORNERED, NormKind.LP):
        failures = 0
        total = 0
        for y in exact_pareto_set(inst):
            yr = random_refpoint(rng, inst)
            wc = weight_for_pareto_point(inst, y, yr, kind)
            norm = wc.norm()
            for z in inst.points:
                if z == y:
                    continue
                total += 1
                dz = tuple(a - b for a, b in zip(z, yr))
                dy = tuple(a - b for a, b in zip(y, yr))
                if compare_norm(norm, dy, dz).sign >= 0:
                    failures += 1
        rep.add("weights", idx, f"unique-minimizer[{kind.value}]", "strict", f"{total - failures}/{total}",
                failures == 0)
    return rep


def suite_weights(seed: int = 0, size: int = 200) -> Report:
    """Weights that single out each Pareto point (``k = 2``, ``M <= 20``)."""
    insts = corpus(seed, size, k=2, max_bound=20)
    return _merge(_map(_weight_checks, [(i, inst, seed) for i, inst in enumerate(insts)]))


# ---------------------------------------------------------------------------
# shortest paths


def _fptas_checks(args) -> Report:
    from .fptas import (
        brute_sp_rp,
        bounds_via_weighted_sum,
        fptas_cp_sp,
        fptas_rp_sp,
        graph_ideal_point,
        pseudopoly_sp_rp,
        scaled_ideal_sandwich,
    )

    idx, seed, eps_values, max_nodes = args
    rng = random.Random(seed * 5_000_011 + idx)
    rep = Report()
    graph = random_digraph(rng, max_nodes=max_nodes, density=rng.choice((None, 0.2, 0.35)))
    ideal = graph_ideal_point(graph)
    yr = ObjectiveVector(rng.randint(0, v) for v in ideal)
    p = rng.choice((None, 1, 2, 5))
    weights = (1, 1) if rng.random() < 0.5 else random_weights(rng, graph.k)
    norm = Norm.infinity(weights) if p is None else Norm.cornered(p, weights)
    ctx = ReferenceContext(yr, norm, verified=True)
    bounds = bounds_via_weighted_sum(graph, ctx)
    exact = pseudopoly_sp_rp(graph, ctx, bounds.U)
    rep.add("fptas", idx, "bounds", graph.k, ratio(bounds.U, exact.value),
            bounds.L <= exact.value.const <= bounds.U)
    if graph.n < 8:
        brute = brute_sp_rp(graph, ctx)
        rep.add("fptas", idx, "label-dp-vs-enumeration", 1, ratio(exact.value, brute.value),
                exact.value.const == brute.value.const)
    for eps in eps_values:
        res = fptas_rp_sp(graph, ctx, eps)
        ok = res.value.const <= (1 + eps) * exact.value.const
        if res.scaled is not None:
            ok = ok and res.scaled.sandwich_holds()
        rep.add("fptas", idx, f"fptas-rp[eps={format_rational(eps)}]", 1 + eps, ratio(res.value, exact.value), ok)
        cp = fptas_cp_sp(graph, norm, eps)
        cctx = ReferenceContext(ideal, norm)
        cp_opt = pseudopoly_sp_rp(graph, cctx, bounds_via_weighted_sum(graph, cctx).U)
        ok = cp.value.const <= (1 + eps) * cp_opt.value.const
        if cp.scaled is not None:
            ok = ok and scaled_ideal_sandwich(cp.scaled, ideal)
        rep.add("fptas", idx, f"fptas-cp[eps={format_rational(eps)}]", 1 + eps, ratio(cp.value, cp_opt.value), ok)
    return rep


def suite_fptas(seed: int = 0, graphs: int = 50, *, eps=(Fraction(1, 2), Fraction(1, 10)), max_nodes: int = 25) -> Report:
    """FPTAS ratios against the exact label algorithm, which is itself checked by path enumeration."""
    args = [(i, seed, tuple(Fraction(e) for e in eps), max_nodes) for i in range(graphs)]
    return _merge(_map(_fptas_checks, args))


# ---------------------------------------------------------------------------
# linear programming


def _lp_checks(args) -> Report:
    from .lp import (
        RPProgram,
        brute_covering_rp,
        hochbaum_round,
        rp_lp_solve,
        rp_vertex_oracle,
        lp_ideal_point,
        polygon_vertices,
        rp_via_lp_rounding,
    )
    from .lp.rp import image

    idx, seed = args
    rng = random.Random(seed * 9_000_041 + idx)
    rep = Report()
    poly, C = random_polygon(rng)
    verts = polygon_vertices(poly)
    if verts:
        ideal = [min(image(C, v)[i] for v in verts) for i in range(len(C))]
        yr = ObjectiveVector(Fraction(rng.randint(0, 4 * int(v)), 4) if v >= 1 else 0 for v in ideal)
        yr = ObjectiveVector(min(a, b) for a, b in zip(yr, ideal))
        spec = rng.choice(("inf", "cornered:1", "cornered:2", "cornered:3"))
        ctx = ReferenceContext(yr, Norm.parse(spec, random_weights(rng, len(C))))
        prog = RPProgram(poly, C, ctx)
        sol = rp_lp_solve(prog)
        _, best = rp_vertex_oracle(prog)
        same = sol.value == best and sol.value == ref_objective(ctx, sol.point).const and poly.contains(sol.x)
        rep.add("lp", idx, f"rp-lp-vs-vertices[{spec}]", 1, ratio(sol.value, best), same)
    cov = random_covering(rng)
    lp_ideal = lp_ideal_point(cov.relaxation(), cov.cost_matrix)
    yr = ObjectiveVector(Fraction(rng.randint(0, int(2 * v)), 2) for v in lp_ideal)
    yr = ObjectiveVector(min(a, b) for a, b in zip(yr, lp_ideal))
    spec = rng.choice(("inf", "cornered:1", "cornered:2"))
    ctx = ReferenceContext(yr, Norm.parse(spec, random_weights(rng, cov.k)))
    res = rp_via_lp_rounding(cov, ctx)
    _, opt = brute_covering_rp(cov, ctx)
    kappa = cov.kappa
    coordinatewise = all(a <= kappa * b for a, b in zip(res.x, res.fractional_x))
    chain = res.value <= kappa * res.fractional_value <= kappa * opt
    rep.add("lp", idx, f"covering-rounding[{spec}]", kappa, ratio(res.value, opt),
            coordinatewise and chain and res.value <= kappa * opt and res.x == hochbaum_round(cov, res.fractional_x))
    return rep


def triangle_vertex_cover() -> dict:
    """The triangle vertex cover pipeline with unit bicriteria costs, ``y^r = 0``, infinity norm."""
    from .lp import CoveringInstance, brute_covering_rp, rp_via_lp_rounding

    inst = CoveringInstance.vertex_cover(3, [(0, 1), (1, 2), (0, 2)], [(1, 1)] * 3)
    ctx = ReferenceContext((0, 0), Norm.infinity((1, 1)))
    res = rp_via_lp_rounding(inst, ctx)
    _, opt = brute_covering_rp(inst, ctx)
    return {
        "fractional": res.fractional_x,
        "fractional_value": res.fractional_value,
        "rounded": res.x,
        "rounded_cost": sum(res.x),
        "rounded_value": res.value,
        "integral_opt": opt,
        "ratio": res.value / opt,
        "kappa": inst.kappa,
    }


def suite_lp(seed: int = 0, size: int = 60) -> Report:
    rep = _merge(_map(_lp_checks, [(i, seed) for i in range(size)]))
    tri = triangle_vertex_cover()
    ok = (tri["fractional"] == (Fraction(1, 2),) * 3 and tri["rounded_cost"] == 3 and tri["integral_opt"] == 2
          and tri["ratio"] == Fraction(3, 2) and tri["ratio"] <= tri["kappa"] == 2)
    rep.add("lp", "triangle", "vertex-cover-pipeline", tri["kappa"], tri["ratio"], ok)
    return rep


# ---------------------------------------------------------------------------
# maximization


def _max_checks(args) -> Report:
    from .maximization import exact_max_rp_solver, max_gap_via_rp, max_select_from_pareto

    idx, inst, seed = args
    rng = random.Random(seed * 11_000_027 + idx)
    rep = Report()
    alpha = rng.choice((Fraction(11, 10), Fraction(2), Fraction(3)))
    solver = exact_max_rp_solver()
    bad = 0
    qs = []
    for _ in range(10):
        y = tuple(rng.randint(0, inst.bound) for _ in range(inst.k))
        if any(y):
            qs.append(y)
    for p in rng.sample(inst.points, min(4, len(inst.points))):
        if any(p):
            qs.append(tuple(p))
            qs.append(tuple(v / alpha for v in p))
    for y in qs:
        ans = max_gap_via_rp(inst, y, alpha, solver, inst.bound)
        if isinstance(ans, Witness):
            bad += not (ans.point in inst and leq(y, ans.point))
        elif isinstance(ans, NoneAbove):
            bad += any(leq(tuple(alpha * v for v in y), p) for p in inst.points)
        else:
            bad += 1
    rep.add("max", idx, f"max-gap[alpha={format_rational(alpha)}]", "sound", f"{len(qs) - bad}/{len(qs)}", bad == 0)

    approx = random_approx_pareto(rng, inst, alpha, Sense.MAX)
    yr = random_refpoint(rng, inst, Sense.MAX)
    spec = random_norm_spec(rng)
    ctx = ReferenceContext(yr, Norm.parse(spec, random_weights(rng, inst.k)), Sense.MAX)
    chosen = max_select_from_pareto(approx, ctx)
    _, opt = _best(inst.points, ctx, Sense.MAX)
    val = ref_objective(ctx, chosen)
    rep.add("max", idx, f"max-pareto-to-rp[{spec}]", alpha, ratio(opt, val), val * alpha >= opt)
    return rep


def suite_max(seed: int = 0, size: int = 200) -> Report:
    from .maximization import cp_indistinguishability_check, ws_counterexample_check

    rep = Report()
    ws = ws_counterexample_check(grid=100)
    rep.add("max", "ws-fixture", "weighted-sum-never-returns-(1,1)", "0 of 100",
            f"{ws['returned_11']} of {ws['grid']}", ws["never_optimal"])
    cp = cp_indistinguishability_check(1000, Fraction(1, 2), delta=Fraction(1, 100))
    rep.add("max", "cp-fixture", "cp-regimes[M=1000,eps=1/2]", cp["analytic_bound"], cp["max_delta_needed"],
            cp["y_required"] and cp["regimes_hold"] and cp["indistinguishable"])
    insts = corpus(seed, size)
    rep.extend(_merge(_map(_max_checks, [(i, inst, seed) for i, inst in enumerate(insts)])))
    return rep


# ---------------------------------------------------------------------------


SUITE_FUNCTIONS = {
    "factors": suite_factors,
    "gap": suite_gap,
    "grid": suite_grid,
    "weights": suite_weights,
    "fptas": suite_fptas,
    "lp": suite_lp,
    "max": suite_max,
}


def run_suite(name: str, seed: int = 0, **kwargs) -> Report:
    """Run one suite or a group; keyword arguments reach the suites that accept them."""
    if name in GROUPS:
        return _merge(run_suite(s, seed, **kwargs) for s in GROUPS[name])
    fn = SUITE_FUNCTIONS.get(name)
    if fn is None:
        raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITES + tuple(GROUPS))}")
    params = inspect.signature(fn).parameters
    return fn(seed, **{k: v for k, v in kwargs.items() if k in params and v is not None})
