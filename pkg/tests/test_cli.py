import json
import subprocess
import sys
from fractions import Fraction

import pytest

from refpoint.cli import EXIT_INFEASIBLE, EXIT_OK, EXIT_USAGE, EXIT_VIOLATION, main, parse_rational
from refpoint.core import Norm, ReferenceContext, Sense, ref_objective
from refpoint.reductions import RPApproxSolver

GRAPH = {"k": 2, "n": 4, "s": 0, "t": 3,
         "edges": [[0, 1, [3, 4]], [1, 3, [3, 2]], [0, 2, [1, 6]], [2, 3, [2, 5]], [0, 3, [9, 9]]]}
COVERING = {"type": "covering", "elements": 3,
            "sets": [{"members": m, "cost": [1, 1]} for m in ([0, 2], [0, 1], [1, 2])]}
POLY = {"type": "lp", "n": 2, "rows": [[[1, 1], "=", 1]], "C": [[1, 0], [0, 1]]}


@pytest.fixture
def files(tmp_path):
    out = {}
    for name, doc in {"routes": [[10, 1], [6, 6], [1, 10]], "single": [[3, 4]], "graph": GRAPH,
                      "cover": COVERING, "poly": POLY}.items():
        path = tmp_path / f"{name}.json"
        path.write_text(json.dumps(doc))
        out[name] = str(path)
    return out


def run(capsys, *argv, **kwargs):
    code = main(list(argv), **kwargs)
    captured = capsys.readouterr()
    doc = None
    if code == EXIT_OK and captured.out.lstrip().startswith("{"):
        doc = json.loads(captured.out)
    return code, doc, captured


def revalidate(doc):
    weights = doc["weights"]
    spec = doc["norm"]
    norm = Norm.parse(spec, weights, allow_zero=doc["sense"] == "max")
    ctx = ReferenceContext(doc["refpoint"], norm, Sense(doc["sense"]))
    value = ref_objective(ctx, doc["objective_vector"])
    text = doc["r_value"]
    if text.startswith("["):
        # irrational values are reported as an enclosing interval
        lo, hi = (parse_rational(t) for t in text.strip("[]").split(","))
        return lo <= value <= hi
    return value == parse_rational(text)


def test_rp_routes(capsys, files):
    code, doc, _ = run(capsys, "rp", files["routes"], "--norm", "inf", "--refpoint", "1,1")
    assert code == EXIT_OK
    assert doc["objective_vector"] == [6, 6] and doc["r_value"] == "6"
    assert revalidate(doc)


def test_rp_infeasible_refpoint(capsys, files):
    code, _, captured = run(capsys, "rp", files["routes"], "--refpoint", "5,5")
    assert code == EXIT_INFEASIBLE
    assert "infeasible" in captured.err


@pytest.mark.parametrize("argv", [
    ["rp", "ROUTES", "--refpoint", "1,x"],
    ["rp", "ROUTES", "--norm", "lp:0"],
    ["rp", "ROUTES", "--refpoint", "1,1,1"],
    ["rp", "ROUTES", "--weights", "1"],
    ["nonsense"],
])
def test_usage_errors(capsys, files, argv):
    argv = [files["routes"] if a == "ROUTES" else a for a in argv]
    assert run(capsys, *argv)[0] == EXIT_USAGE


def test_missing_file(capsys, tmp_path):
    assert run(capsys, "rp", str(tmp_path / "nope.json"))[0] == EXIT_USAGE


def test_cp_singleton(capsys, files):
    code, doc, _ = run(capsys, "cp", files["single"], "--norm", "cornered:2")
    assert code == EXIT_OK and doc["objective_vector"] == [3, 4]
    assert revalidate(doc)


def test_cp_routes_values_revalidate(capsys, files):
    for spec in ("inf", "lp:2", "cornered:1"):
        code, doc, _ = run(capsys, "cp", files["routes"], "--norm", spec)
        assert code == EXIT_OK and revalidate(doc)


def test_max_rp(capsys, files):
    code, doc, _ = run(capsys, "rp", files["routes"], "--sense", "max", "--refpoint", "10,10")
    assert code == EXIT_OK and doc["objective_vector"] == [6, 6]
    assert revalidate(doc)


def test_pareto_exact_and_gap(capsys, files):
    code, doc, _ = run(capsys, "pareto", files["routes"], "--via", "exact")
    assert code == EXIT_OK and doc["size"] == 3
    code, doc, _ = run(capsys, "pareto", files["routes"], "--epsilon", "0.1", "--via", "gap")
    assert code == EXIT_OK
    assert parse_rational(doc["observed_factor"]) <= Fraction(121, 100)
    code, doc, _ = run(capsys, "pareto", files["single"], "--via", "exact")
    assert doc["size"] == 1


def test_gap_command(capsys, files):
    code, doc, _ = run(capsys, "gap", files["routes"], "--query", "6,6", "--alpha", "2")
    assert code == EXIT_OK and doc["answer"] == "witness"
    code, doc, _ = run(capsys, "gap", files["routes"], "--query", "1,1", "--alpha", "2")
    assert code == EXIT_OK and doc["answer"] == "none-below"


def test_graph_commands(capsys, files):
    code, doc, _ = run(capsys, "rp", files["graph"], "--refpoint", "0,0")
    assert code == EXIT_OK and revalidate(doc)
    exact = parse_rational(doc["r_value"])
    code, doc, _ = run(capsys, "fptas-sp", files["graph"], "--epsilon", "1/2", "--refpoint", "0,0", "--check")
    assert code == EXIT_OK and revalidate(doc)
    assert parse_rational(doc["r_value"]) <= Fraction(3, 2) * exact


def test_lp_and_round(capsys, files):
    code, doc, _ = run(capsys, "lp-rp", files["poly"], "--refpoint", "0,0")
    assert code == EXIT_OK and doc["r_value"] == "1/2"
    code, doc, _ = run(capsys, "round", files["cover"], "--refpoint", "0,0", "--check")
    assert code == EXIT_OK and doc["objective_vector"] == [3, 3]
    assert revalidate(doc)


def test_fixtures(capsys):
    code, doc, _ = run(capsys, "fixtures", "ws-max")
    assert code == EXIT_OK and doc["check"]["returned_11"] == 0 and doc["check"]["never_optimal"]
    code, doc, _ = run(capsys, "fixtures", "cp-max", "--M", "1000", "--eps", "1/2", "--delta", "1")
    assert code == EXIT_OK and doc["check"]["regimes_hold"] and doc["check"]["indistinguishable"]


def test_stdin_input(monkeypatch, capsys):
    import io

    monkeypatch.setattr(sys, "stdin", io.StringIO("[[10,1],[6,6],[1,10]]"))
    code, doc, _ = run(capsys, "rp", "-", "--refpoint", "1,1")
    assert code == EXIT_OK and doc["objective_vector"] == [6, 6]


def test_verify_ok_and_tampered(capsys):
    code, _, captured = run(capsys, "verify", "factors", "--size", "10")
    assert code == EXIT_OK
    assert captured.out.splitlines()[0].startswith("suite,")

    def worst(inst, ctx):
        return max(inst.points, key=lambda p: ref_objective(ctx, p))

    code, _, _ = run(capsys, "verify", "factors", "--size", "10", solver_override=RPApproxSolver(worst, 1))
    assert code == EXIT_VIOLATION


def test_verify_fptas_epsilon(capsys):
    code, _, captured = run(capsys, "verify", "fptas", "--size", "5", "--epsilon", "0.5", "--format", "json")
    doc = json.loads(captured.out)
    assert code == EXIT_OK and doc["violations"] == 0
    ratios = [parse_rational(r["observed"]) for r in doc["rows"] if r["check"].startswith("fptas")]
    assert ratios and max(ratios) <= Fraction(3, 2)


def test_module_entry_point(files):
    out = subprocess.run([sys.executable, "-m", "refpoint", "rp", files["routes"], "--refpoint", "1,1"],
                         capture_output=True, text=True, check=True)
    assert json.loads(out.stdout)["r_value"] == "6"


def test_output_is_deterministic(capsys, files):
    first = run(capsys, "pareto", files["routes"], "--alpha", "2", "--via", "gap")[2].out
    second = run(capsys, "pareto", files["routes"], "--alpha", "2", "--via", "gap")[2].out
    assert first == second
