"""Command line front end.

Every command reads one JSON instance (``-`` for stdin), runs a solver and
prints a JSON document with sorted keys.  Rationals are printed as exact
``"num/den"`` strings next to a decimal convenience field.

Exit codes: 0 success, 1 a ``verify`` bound violation, 2 a parse or usage
error, 3 an infeasible reference point.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Sequence

from .core import (
    DimensionError,
    InfeasibleReferencePoint,
    Norm,
    NormValue,
    ObjectiveVector,
    ReferenceContext,
    Sense,
    as_fraction,
    format_rational,
    leq,
    ref_objective,
)
from .explicit import (
    ExactGapOracle,
    ExplicitInstance,
    brute_cp_optimum,
    brute_rp_optimum,
    exact_pareto_set,
    ideal_point,
    is_feasible_refpoint,
)

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_USAGE = 2
EXIT_INFEASIBLE = 3

INFEASIBLE_NOTE = (
    "feasibility was decided against the exact ideal point; an approximate solver "
    "alone cannot tell a slightly infeasible reference point from a feasible one"
)


class UsageError(ValueError):
    """Bad input: exit code 2."""


# ---------------------------------------------------------------------------
# parsing helpers


def parse_vector(text: str | None) -> ObjectiveVector | None:
    if text is None:
        return None
    try:
        return ObjectiveVector(as_fraction(v.strip()) for v in text.split(","))
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"cannot parse vector {text!r}: {exc}") from None


def parse_rational(text: str | None) -> Fraction | None:
    if text is None:
        return None
    try:
        return as_fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"cannot parse number {text!r}: {exc}") from None


def load_document(path: str):
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not valid JSON: {exc}") from None


def detect_type(doc) -> str:
    """Instance type from an explicit ``"type"`` field or the JSON shape."""
    if isinstance(doc, list):
        return "explicit"
    if not isinstance(doc, dict):
        raise UsageError("an instance must be a JSON object or a list of points")
    if "type" in doc:
        return str(doc["type"])
    for key, kind in (("points", "explicit"), ("edges", "graph"), ("sets", "covering"), ("rows", "lp")):
        if key in doc:
            return kind
    raise UsageError("cannot detect the instance type; add a \"type\" field")


class LPInstance:
    """Polyhedron plus cost matrix ``C`` (one row per criterion)."""

    def __init__(self, doc: dict):
        from .lp import Polyhedron

        if "C" not in doc:
            raise UsageError("an lp instance needs a cost matrix \"C\"")
        self.poly = Polyhedron.from_json(doc)
        self.C = tuple(tuple(as_fraction(v) for v in row) for row in doc["C"])
        if any(len(row) != self.poly.n for row in self.C):
            raise DimensionError("cost matrix columns do not match the variable count")

    @property
    def k(self) -> int:
        return len(self.C)


def load_instance(path: str, kind: str | None = None):
    doc = load_document(path)
    kind = kind or detect_type(doc)
    try:
        if kind == "explicit":
            return kind, ExplicitInstance.from_json({"points": doc} if isinstance(doc, list) else doc)
        if kind == "graph":
            from .fptas import GraphInstance

            return kind, GraphInstance.from_json(doc)
        if kind == "covering":
            from .lp import CoveringInstance

            return kind, CoveringInstance.from_json(doc)
        if kind == "lp":
            return kind, LPInstance(doc)
    except (KeyError, TypeError) as exc:
        raise UsageError(f"malformed {kind} instance: missing or bad field {exc}") from None
    raise UsageError(f"unknown instance type {kind!r}")


def make_norm(args, k: int) -> Norm:
    weights = parse_vector(args.weights) if args.weights else ObjectiveVector((1,) * k)
    if len(weights) != k:
        raise UsageError(f"{len(weights)} weights for {k} criteria")
    try:
        norm = Norm.parse(args.norm, weights, allow_zero=args.sense == "max")
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if norm.p is not None and norm.p < 1:
        raise UsageError("norm parameter p must be at least 1")
    return norm


# ---------------------------------------------------------------------------
# result documents


def _value_json(v) -> dict:
    v = NormValue.of(v)
    if v.is_exact:
        return {"r_value": format_rational(v.const), "r_decimal": float(v.const)}
    lo, hi = v.enclosure(64)
    return {"r_value": f"[{format_rational(lo)}, {format_rational(hi)}]", "r_decimal": float((lo + hi) / 2)}


def solution_document(ctx: ReferenceContext, point, *, method: str, factor, solution=None, **extra) -> dict:
    """Result document; ``r_value`` is recomputed from the emitted vector."""
    point = ObjectiveVector(point)
    doc = {
        "method": method,
        "objective_vector": point.to_json(),
        "refpoint": ctx.refpoint.to_json(),
        "norm": ctx.norm.spec(),
        "weights": [format_rational(w) for w in ctx.norm.weights],
        "sense": ctx.sense.value,
        "factor_guarantee": format_rational(factor),
        "solution": solution if solution is not None else point.to_json(),
    }
    doc.update(_value_json(ref_objective(ctx, point)))
    doc.update(extra)
    return doc


def emit(doc) -> None:
    sys.stdout.write(json.dumps(doc, sort_keys=True, indent=2) + "\n")


def _infeasible(refpoint, ideal) -> InfeasibleReferencePoint:
    return InfeasibleReferencePoint(f"reference point {refpoint} is not feasible: ideal point is {ideal}")


# ---------------------------------------------------------------------------
# commands


def _solve_reference(kind, inst, ctx: ReferenceContext, eps) -> dict:
    sense = ctx.sense
    if sense is Sense.MAX and kind != "explicit":
        raise UsageError("maximization is available for explicit instances only")
    if kind == "explicit":
        if sense is Sense.MAX:
            from .maximization import brute_max_rp

            if not is_feasible_refpoint(inst, ctx.refpoint, Sense.MAX):
                raise _infeasible(ctx.refpoint, ideal_point(inst, Sense.MAX))
            point, _ = brute_max_rp(inst, ctx)
        else:
            point, _ = brute_rp_optimum(inst, ctx)
        return solution_document(ctx, point, method="explicit-enumeration", factor=1)
    if kind == "graph":
        from .fptas import bounds_via_weighted_sum, fptas_rp_sp, graph_ideal_point, pseudopoly_sp_rp

        ideal = graph_ideal_point(inst)
        if not leq(ctx.refpoint, ideal):
            raise _infeasible(ctx.refpoint, ideal)
        if eps is None:
            sol = pseudopoly_sp_rp(inst, ctx, bounds_via_weighted_sum(inst, ctx).U)
            return solution_document(ctx, sol.cost, method="label-correcting", factor=1, solution=list(sol.nodes))
        res = fptas_rp_sp(inst, ctx, eps)
        return solution_document(ctx, res.solution.cost, method="fptas", factor=1 + eps,
                                 solution=list(res.solution.nodes))
    if kind == "lp":
        from .lp import RPProgram, lp_ideal_point, rp_lp_solve

        ideal = lp_ideal_point(inst.poly, inst.C)
        if not leq(ctx.refpoint, ideal):
            raise _infeasible(ctx.refpoint, ideal)
        res = rp_lp_solve(RPProgram(inst.poly, inst.C, ctx))
        return solution_document(ctx, res.point, method="linear-program", factor=1,
                                 solution=[format_rational(v) for v in res.x])
    if kind == "covering":
        from .lp import brute_covering_rp

        ideal = ObjectiveVector(min(c[i] for c in (inst.cost(x) for x in inst.all_covers())) for i in range(inst.k))
        if not leq(ctx.refpoint, ideal):
            raise _infeasible(ctx.refpoint, ideal)
        x, _ = brute_covering_rp(inst, ctx)
        return solution_document(ctx, inst.cost(x), method="cover-enumeration", factor=1, solution=list(x))
    raise UsageError(f"unsupported instance type {kind!r}")


def _instance_ideal(kind, inst, sense: Sense) -> ObjectiveVector:
    if kind == "explicit":
        return ideal_point(inst, sense)
    if kind == "graph":
        from .fptas import graph_ideal_point

        return graph_ideal_point(inst)
    if kind == "lp":
        from .lp import lp_ideal_point

        return lp_ideal_point(inst.poly, inst.C)
    if kind == "covering":
        costs = [inst.cost(x) for x in inst.all_covers()]
        return ObjectiveVector(min(c[i] for c in costs) for i in range(inst.k))
    raise UsageError(f"unsupported instance type {kind!r}")


def cmd_rp(args) -> dict:
    kind, inst = load_instance(args.instance, args.type)
    refpoint = parse_vector(args.refpoint)
    if refpoint is None:
        raise UsageError("rp needs --refpoint")
    if len(refpoint) != inst.k:
        raise UsageError(f"reference point has {len(refpoint)} coordinates, instance has {inst.k} criteria")
    ctx = ReferenceContext(refpoint, make_norm(args, inst.k), Sense(args.sense))
    doc = _solve_reference(kind, inst, ctx, parse_rational(args.epsilon))
    doc["command"] = "rp"
    return doc


def cmd_cp(args) -> dict:
    kind, inst = load_instance(args.instance, args.type)
    norm = make_norm(args, inst.k)
    sense = Sense(args.sense)
    eps = parse_rational(args.epsilon)
    if kind == "graph" and eps is not None:
        from .fptas import fptas_cp_sp, graph_ideal_point

        res = fptas_cp_sp(inst, norm, eps)
        ctx = ReferenceContext(graph_ideal_point(inst), norm)
        doc = solution_document(ctx, res.solution.cost, method="fptas", factor=1 + eps,
                                solution=list(res.solution.nodes))
    elif kind == "explicit" and sense is Sense.MIN:
        point, _ = brute_cp_optimum(inst, norm)
        doc = solution_document(ReferenceContext(ideal_point(inst), norm), point,
                                method="explicit-enumeration", factor=1)
    else:
        ctx = ReferenceContext(_instance_ideal(kind, inst, sense), norm, sense, verified=True)
        doc = _solve_reference(kind, inst, ctx, eps)
    doc["command"] = "cp"
    return doc


def cmd_gap(args) -> dict:
    from .reductions import gap_via_rp_inf, gap_via_rp_pnorm

    kind, inst = load_instance(args.instance, args.type)
    y = parse_vector(args.query)
    if y is None:
        raise UsageError("gap needs --query")
    if len(y) != inst.k:
        raise UsageError("query dimension does not match the instance")
    alpha = parse_rational(args.alpha) or Fraction(2)
    if alpha <= 1:
        raise UsageError("alpha must exceed 1")
    sense = Sense(args.sense)
    doc = {"command": "gap", "query": y.to_json(), "alpha": format_rational(alpha), "via": args.via}
    if kind == "explicit":
        if sense is Sense.MAX:
            from .maximization import exact_max_rp_solver, max_gap_via_rp

            ans = max_gap_via_rp(inst, y, alpha, exact_max_rp_solver(), inst.bound)
            doc["via"] = "rp-max"
        elif args.via == "exact":
            ans = ExactGapOracle(inst, alpha)(y)
        else:
            from .verify import unchecked_rp_solver

            ideal = ideal_point(inst)
            solver = unchecked_rp_solver()
            if args.via == "rp-inf":
                ans = gap_via_rp_inf(inst, y, alpha, lambda _i: ideal, solver)
            else:
                ans = gap_via_rp_pnorm(inst, y, alpha, lambda _i: ideal, solver,
                                       args.via.split(":", 1)[1], bound=inst.bound)
    elif kind == "lp" and sense is Sense.MIN:
        from .lp import LPHandle, lp_ideal_point, lp_rp_solver

        handle = LPHandle(inst.poly, inst.C)
        ideal = lp_ideal_point(inst.poly, inst.C)
        ans = gap_via_rp_inf(handle, y, alpha, lambda _h: ideal, lp_rp_solver(), integral=False)
        doc["via"] = "rp-inf"
        if hasattr(ans, "point"):
            doc["solution"] = [format_rational(v) for v in handle.preimage[ans.point]]
    else:
        raise UsageError("gap supports explicit instances and (for minimization) lp instances")
    doc.update(ans.to_json())
    return doc


def cmd_pareto(args) -> dict:
    from .reductions import ApproxParetoSet, coverage_factor, epsilon_pareto_via_gap

    kind, inst = load_instance(args.instance, args.type)
    sense = Sense(args.sense)
    alpha = parse_rational(args.alpha)
    eps = parse_rational(args.epsilon)
    if alpha is None and eps is not None:
        alpha = 1 + eps
    via = args.via or ("exact" if alpha is None else "gap")
    if alpha is not None and alpha <= 1:
        raise UsageError("alpha must exceed 1 (epsilon must be positive)")
    doc = {"command": "pareto", "via": via, "sense": sense.value}
    if kind == "explicit":
        pareto = exact_pareto_set(inst, sense)
        if via == "exact":
            result = ApproxParetoSet(1, pareto, {p: "exact" for p in pareto}, sense)
        else:
            if alpha is None:
                raise UsageError("--via gap needs --alpha or --epsilon")
            if sense is Sense.MAX:
                raise UsageError("the Gap grid is implemented for minimization")
            result = epsilon_pareto_via_gap(ExactGapOracle(inst, alpha), alpha, k=inst.k, bound=inst.bound,
                                            lower=1 if not inst.rational else min(
                                                (v for p in inst.points for v in p if v > 0), default=1))
        cov = coverage_factor(result.points, pareto, sense)
        doc["observed_factor"] = format_rational(cov)
        doc["observed_factor_decimal"] = float(cov)
    elif kind == "lp" and sense is Sense.MIN:
        from .lp import fptas_pareto_lp, lp_ideal_point

        if eps is None:
            if alpha is None:
                raise UsageError("lp instances need --epsilon (or --alpha)")
            eps = alpha - 1
        positivity = parse_rational(args.positivity) or min(lp_ideal_point(inst.poly, inst.C))
        if positivity <= 0:
            raise UsageError("lp Pareto approximation needs positive objective values; pass --positivity")
        result = fptas_pareto_lp(inst.poly, inst.C, eps, positivity)
        doc["via"] = "gap"
    else:
        raise UsageError("pareto supports explicit instances and (for minimization) lp instances")
    doc.update(result.to_json())
    doc["size"] = len(result.points)
    return doc


def cmd_fptas_sp(args) -> dict:
    from .fptas import GraphInstance, pseudopoly_sp_rp

    kind, inst = load_instance(args.instance, args.type or "graph")
    if not isinstance(inst, GraphInstance):
        raise UsageError("fptas-sp needs a graph instance")
    eps = parse_rational(args.epsilon)
    if eps is None or eps <= 0:
        raise UsageError("fptas-sp needs a positive --epsilon")
    norm = make_norm(args, inst.k)
    if args.refpoint is None:
        from .fptas import fptas_cp_sp, graph_ideal_point

        res = fptas_cp_sp(inst, norm, eps)
        ctx = ReferenceContext(graph_ideal_point(inst), norm, verified=True)
        problem = "cp"
    else:
        from .fptas import fptas_rp_sp

        refpoint = parse_vector(args.refpoint)
        if len(refpoint) != inst.k:
            raise UsageError("reference point dimension does not match the instance")
        ctx = ReferenceContext(refpoint, norm)
        res = fptas_rp_sp(inst, ctx, eps)
        problem = "rp"
    extra = {
        "command": "fptas-sp",
        "problem": problem,
        "epsilon": format_rational(eps),
        "bounds": res.bounds.to_json(),
    }
    if args.check:
        exact = pseudopoly_sp_rp(inst, ctx, res.bounds.U)
        opt = exact.value.const
        got = ref_objective(ctx, res.solution.cost).const
        r = Fraction(1) if opt == 0 and got == 0 else (got / opt if opt else None)
        extra["exact_r_value"] = format_rational(opt)
        extra["observed_ratio"] = None if r is None else format_rational(r)
    return solution_document(ctx, res.solution.cost, method="fptas", factor=1 + eps,
                             solution=list(res.solution.nodes), **extra)


def cmd_lp_rp(args) -> dict:
    from .lp import RPProgram, lp_ideal_point, rp_lp_solve

    kind, inst = load_instance(args.instance, args.type or "lp")
    if kind == "covering":
        poly, C = inst.relaxation(), inst.cost_matrix
    elif kind == "lp":
        poly, C = inst.poly, inst.C
    else:
        raise UsageError("lp-rp needs an lp or covering instance")
    ideal = lp_ideal_point(poly, C)
    norm = make_norm(args, len(C))
    refpoint = parse_vector(args.refpoint) or ideal
    if len(refpoint) != len(C):
        raise UsageError("reference point dimension does not match the instance")
    if not leq(refpoint, ideal):
        raise _infeasible(refpoint, ideal)
    ctx = ReferenceContext(refpoint, norm, verified=True)
    res = rp_lp_solve(RPProgram(poly, C, ctx))
    return solution_document(ctx, res.point, method="linear-program", factor=1,
                             solution=[format_rational(v) for v in res.x], command="lp-rp",
                             delta=format_rational(res.delta))


def cmd_round(args) -> dict:
    from .lp import CoveringInstance, brute_covering_rp, rp_via_lp_rounding

    kind, inst = load_instance(args.instance, args.type or "covering")
    if not isinstance(inst, CoveringInstance):
        raise UsageError("round needs a covering instance")
    norm = make_norm(args, inst.k)
    refpoint = parse_vector(args.refpoint) or ObjectiveVector((0,) * inst.k)
    if len(refpoint) != inst.k:
        raise UsageError("reference point dimension does not match the instance")
    ctx = ReferenceContext(refpoint, norm)
    res = rp_via_lp_rounding(inst, ctx)
    extra = {
        "command": "round",
        "kappa": inst.kappa,
        "fractional_solution": [format_rational(v) for v in res.fractional_x],
        "fractional_r_value": format_rational(res.fractional_value),
    }
    if args.check:
        _, opt = brute_covering_rp(inst, ctx)
        extra["exact_r_value"] = format_rational(opt)
        extra["observed_ratio"] = format_rational(res.value / opt) if opt else "1"
    return solution_document(ctx, res.point, method="threshold-rounding", factor=res.factor,
                             solution=list(res.x), **extra)


def cmd_fixtures(args) -> dict:
    from .maximization import cp_counterexample, cp_indistinguishability_check, ws_counterexample, \
        ws_counterexample_check

    if args.fixture == "ws-max":
        full, reduced = ws_counterexample()
        return {
            "command": "fixtures",
            "fixture": "ws-max",
            "instance": full.to_json(),
            "without_11": reduced.to_json(),
            "check": ws_counterexample_check(grid=args.grid),
        }
    M = args.M
    eps = parse_rational(args.eps)
    delta = parse_rational(args.delta)
    try:
        full, reduced = cp_counterexample(M, eps)
        check = cp_indistinguishability_check(M, eps, delta, steps=args.grid)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    return {
        "command": "fixtures",
        "fixture": "cp-max",
        "instance": full.to_json(),
        "without_y": reduced.to_json(),
        "check": check,
    }


def cmd_verify(args, solver_override=None) -> tuple[int, str]:
    from .verify import SUITES, GROUPS, run_suite

    suites = {*SUITES, *GROUPS}
    if args.suite not in suites:
        raise UsageError(f"unknown suite {args.suite!r}; choose from {', '.join(sorted(suites))}")
    kwargs = {"size": args.size, "graphs": args.size, "solver": solver_override}
    if args.epsilon is not None:
        kwargs["eps"] = (parse_rational(args.epsilon),)
    report = run_suite(args.suite, args.seed, **kwargs)
    if args.format == "csv":
        text = report.to_csv()
    else:
        text = json.dumps({
            "suite": args.suite,
            "seed": args.seed,
            "checks": len(report.rows),
            "violations": len(report.violations),
            "rows": [r.__dict__ for r in report.rows],
        }, sort_keys=True, indent=2) + "\n"
    sys.stderr.write(report.summary() + "\n")
    return (EXIT_OK if report.ok else EXIT_VIOLATION), text


# ---------------------------------------------------------------------------
# argument parser


def _common(p: argparse.ArgumentParser, *, refpoint=True, norm=True):
    p.add_argument("instance", help="instance JSON file, '-' for stdin")
    p.add_argument("--type", choices=("explicit", "graph", "lp", "covering"),
                   help="override instance type detection")
    if norm:
        p.add_argument("--norm", default="inf", help="inf | lp:P | cornered:P (default inf)")
        p.add_argument("--weights", help="comma separated weights (default all ones)")
    if refpoint:
        p.add_argument("--refpoint", help="comma separated reference point, e.g. 1,1 or 1/2,3")
    p.add_argument("--sense", choices=("min", "max"), default="min")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="refpoint", description="Reference point and compromise solvers.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("rp", help="reference point solution")
    _common(p)
    p.add_argument("--epsilon", help="use the FPTAS (graph instances)")

    p = sub.add_parser("cp", help="compromise solution (reference point = ideal point)")
    _common(p, refpoint=False)
    p.add_argument("--epsilon", help="use the FPTAS (graph instances)")

    p = sub.add_parser("gap", help="answer a Gap query")
    _common(p, refpoint=False, norm=False)
    p.add_argument("--query", required=True, help="comma separated query vector")
    p.add_argument("--alpha", default="2")
    p.add_argument("--via", default="rp-inf", choices=("rp-inf", "rp-pnorm:cornered", "rp-pnorm:lp", "exact"))

    p = sub.add_parser("pareto", help="exact or approximate Pareto set")
    _common(p, refpoint=False, norm=False)
    p.add_argument("--alpha")
    p.add_argument("--epsilon")
    p.add_argument("--via", choices=("exact", "gap"))
    p.add_argument("--positivity", help="lower bound on objective values (lp instances)")

    p = sub.add_parser("fptas-sp", help="FPTAS for shortest path reference point / compromise problems")
    _common(p)
    p.add_argument("--epsilon", required=True)
    p.add_argument("--check", action="store_true", help="also run the exact label-correcting algorithm")

    p = sub.add_parser("lp-rp", help="reference point problem over a polyhedron")
    _common(p)

    p = sub.add_parser("round", help="LP relaxation plus threshold rounding for covering")
    _common(p)
    p.add_argument("--check", action="store_true", help="also enumerate covers for the exact optimum")

    p = sub.add_parser("fixtures", help="maximization counterexample fixtures")
    p.add_argument("fixture", choices=("ws-max", "cp-max"))
    p.add_argument("--M", type=int, default=1000)
    p.add_argument("--eps", default="1/2")
    p.add_argument("--delta", default=None)
    p.add_argument("--grid", type=int, default=None, help="weight grid size")

    p = sub.add_parser("verify", help="randomized oracle-checked suites")
    p.add_argument("suite", help="reductions | fptas | lp | max (or factors, gap, grid, weights)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--size", type=int, default=None, help="number of instances (graphs for fptas)")
    p.add_argument("--epsilon", default=None, help="FPTAS epsilon (fptas suite)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    return parser


COMMANDS = {
    "rp": cmd_rp,
    "cp": cmd_cp,
    "gap": cmd_gap,
    "pareto": cmd_pareto,
    "fptas-sp": cmd_fptas_sp,
    "lp-rp": cmd_lp_rp,
    "round": cmd_round,
    "fixtures": cmd_fixtures,
}


def main(argv: Sequence[str] | None = None, *, solver_override=None) -> int:
    """Entry point; returns the exit code.

    ``solver_override`` replaces the selection step of the ``factors`` suite
    under ``verify`` (used for negative controls).
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.command == "fixtures" and args.grid is None:
        args.grid = 100 if args.fixture == "ws-max" else 60
    try:
        if args.command == "verify":
            code, text = cmd_verify(args, solver_override)
            sys.stdout.write(text)
            return code
        emit(COMMANDS[args.command](args))
        return EXIT_OK
    except InfeasibleReferencePoint as exc:
        sys.stderr.write(f"refpoint: infeasible reference point: {exc}\nnote: {INFEASIBLE_NOTE}\n")
        return EXIT_INFEASIBLE
    except (UsageError, DimensionError, ValueError) as exc:
        sys.stderr.write(f"refpoint: error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    raise SystemExit(main())
