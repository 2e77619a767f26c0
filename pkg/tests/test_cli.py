import json
import subprocess
import sys
from pathlib import Path

import jsonschema
import pytest

from lightlike import cli
from lightlike.report import load_schema

EXAMPLES = Path(cli.__file__).parent / "examples"
REPORT_SCHEMA = load_schema("report.schema.json")


def run(*args):
    return subprocess.run([sys.executable, "-m", "lightlike", *map(str, args)],
                          capture_output=True, text=True)


def analyze(path, *flags):
    proc = run("analyze", path, *flags)
    assert proc.returncode == 0, proc.stderr
    report = json.loads(proc.stdout)
    jsonschema.validate(report, REPORT_SCHEMA)
    return report, proc


def write(tmp_path, doc, name="model.json"):
    p = tmp_path / name
    p.write_text(json.dumps(doc))
    return p


def all_strings(v):
    if isinstance(v, dict):
        return all(all_strings(x) for x in v.values())
    if isinstance(v, list):
        return all(all_strings(x) for x in v)
    return not isinstance(v, float)


def test_gfh_example():
    report, _ = analyze(EXAMPLES / "gfh_p2.json")
    res = report["results"][0]
    assert res["classification"] == "coisotropic" and res["radical_rank"] == 2
    assert res["osserman"]["verdict"] is True
    lam6 = ["0"] * 6 + ["1"]
    assert res["osserman"]["by_sign"]["spacelike"]["reference_char_poly"] == lam6
    assert res["osserman"]["by_sign"]["timelike"]["reference_char_poly"] == lam6
    assert all(res["checks"].values())
    assert report["seed"] == 0 and report["version"]
    assert all_strings(report)


def test_umbilical_example():
    report, _ = analyze(EXAMPLES / "umbilical.json")
    res = report["results"][0]
    assert res["einstein"]["lambda"] == "3"
    assert res["symmetry_report"]["flags"]["semi_symmetric"]["value"] is True
    assert res["classification"] == "coisotropic"


def test_raw_metric_example():
    report, _ = analyze(EXAMPLES / "raw_diag.json")
    res = report["results"][0]
    assert res["classification"] == "coisotropic" and res["radical_rank"] == 1
    assert "g_tilde" in res and "curvature" not in res and "osserman" not in res


def test_raw_metric_with_curvature(tmp_path):
    # constant curvature on the screen of diag(0, 1, -1), stated in working coordinates
    comps = [([1, 2, 1, 2], -1), ([2, 1, 2, 1], -1), ([1, 2, 2, 1], 1), ([2, 1, 1, 2], 1)]
    doc = {"kind": "raw-metric", "gram": [[0, 0, 0], [0, 1, 0], [0, 0, -1]],
           "curvature": [{"index": i, "value": v} for i, v in comps]}
    report, _ = analyze(write(tmp_path, doc))
    res = report["results"][0]
    assert res["curvature"]["symmetry_status"] == "verified"
    assert res["osserman"]["verdict"] is True


def test_raw_metric_non_algebraic_curvature(tmp_path):
    doc = {"kind": "raw-metric", "gram": [[1, 0], [0, 1]],
           "curvature": [{"index": [0, 1, 0, 1], "value": 1}]}
    report, _ = analyze(write(tmp_path, doc))
    res = report["results"][0]
    assert res["curvature"]["symmetry_status"] == "violated"
    assert res["curvature"]["witness"] and "osserman" not in res


def test_text_format():
    proc = run("analyze", EXAMPLES / "umbilical.json", "--format", "text")
    assert proc.returncode == 0
    assert "Einstein lambda: 3" in proc.stdout and "semi_symmetric=True" in proc.stdout


def test_byte_identical_and_seed_override(tmp_path):
    a = run("analyze", EXAMPLES / "gfh_p2.json", "--seed", "5").stdout
    b = run("analyze", EXAMPLES / "gfh_p2.json", "--seed", "5").stdout
    c = run("analyze", EXAMPLES / "gfh_p2.json", "--seed", "6").stdout
    assert a == b
    ra, rc = json.loads(a)["results"][0], json.loads(c)["results"][0]
    assert ra["osserman"]["verdict"] == rc["osserman"]["verdict"]
    assert ra["trace_identity_residual"] == rc["trace_identity_residual"] == "0"


def test_out_flag(tmp_path):
    out = tmp_path / "r.json"
    proc = run("analyze", EXAMPLES / "raw_diag.json", "--out", out)
    assert proc.returncode == 0 and proc.stdout == ""
    assert "runtime" in proc.stderr
    jsonschema.validate(json.loads(out.read_text()), REPORT_SCHEMA)


def test_float_mode():
    report, _ = analyze(EXAMPLES / "gfh_p2.json", "--mode", "float", "--samples", "4")
    assert report["mode"] == "float"
    assert report["results"][0]["osserman"]["verdict"] is True


@pytest.mark.parametrize("doc,path", [
    ({"kind": "gfh", "p": "x"}, "p"),
    ({"kind": "hypersurface", "m": 1, "c": 1, "g": [[0, 0], [0, 1]],
      "B": [[0, 1], [1, 0]], "A_N": [[0, 0], [0, 0]]}, "B"),
    ({"kind": "hypersurface", "m": 1, "c": {"num": 1, "den": 0}, "g": [[0]], "B": [[0]],
      "A_N": [[0]]}, "c"),
    ({"kind": "gfh", "p": 2, "f": [{"exponents": [2], "num": 1, "den": 1}], "h": [],
      "points": [[0, 0, 0, 0, 0, 0]]}, "f/0/exponents"),
    ({"kind": "raw-metric", "gram": [[0, 1], [0, 0]]}, "gram"),
    ({"kind": "nope"}, ""),
])
def test_input_errors(tmp_path, doc, path):
    proc = run("analyze", write(tmp_path, doc))
    assert proc.returncode == cli.EXIT_INPUT
    assert proc.stderr.startswith("input error")
    assert f"{path}:" in proc.stderr or not path


def test_unreadable_and_malformed(tmp_path):
    assert run("analyze", tmp_path / "missing.json").returncode == cli.EXIT_INPUT
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run("analyze", bad).returncode == cli.EXIT_INPUT


def test_route_disagreement_exit_code(monkeypatch, capsys):
    from lightlike import gfh

    def broken(model):
        R = gfh.curvature(model)
        key = next(iter(R.components))
        return R.perturbed(key, 1)

    monkeypatch.setattr(gfh, "curvature_gauss", broken)
    code = cli.main(["analyze", str(EXAMPLES / "gfh_p2.json")])
    assert code == cli.EXIT_ROUTE
    assert "RouteDisagreement" in capsys.readouterr().err


def test_self_test_failure_exit_code(monkeypatch, capsys):
    from lightlike import acceptance
    from lightlike.acceptance import CriterionResult

    def fake(seed, samples=None, probe=None):
        return [CriterionResult("1", "x", False, 1, {"k": 1})], {"1": 0.0}

    monkeypatch.setattr(cli, "run_suite", fake)
    code = cli.main(["self-test", "--format", "text"])
    out = capsys.readouterr().out
    assert code == cli.EXIT_ACCEPTANCE and "[FAIL]" in out and "witness" in out
