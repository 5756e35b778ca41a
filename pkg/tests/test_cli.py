import json
from pathlib import Path

import pytest

from quiverloc.cli import list_fixtures, main

DATA = Path(__file__).resolve().parent.parent / "data"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr().out
    return code, out


def run_json(capsys, *argv):
    code, out = run(capsys, *argv)
    return code, json.loads(out)


def test_parse(capsys):
    code, rep = run_json(capsys, "parse", DATA / "x2_yx.alg")
    assert code == 0
    assert rep["result"]["generators"] == ["x", "y"]
    assert rep["result"]["n"] == 3
    assert set(rep) == {"command", "inputs_digest", "checks", "result", "wall_time"}


def test_build_counts(capsys):
    code, rep = run_json(capsys, "build", DATA / "x2_yx.alg")
    assert code == 0
    r = rep["result"]
    assert len(r["arrows"]) == 6 and r["dim_A"] == 14
    assert r["T_count"] == 2 and r["Yprime_count"] == 2


def test_gldim(capsys):
    code, rep = run_json(capsys, "gldim", DATA / "x2_yx.alg")
    assert code == 0
    assert rep["result"]["global_dimension"] == 2
    assert rep["result"]["pd"] == {"1": 2, "2": 1, "3": 0}


@pytest.mark.parametrize("target", [DATA / "x2_yx.alg", DATA / "weyl.alg", DATA / "free2.alg",
                                    "weyl4", "subtree4", "dual_numbers",
                                    DATA / "weyl4.fixture", DATA / "subtree4.fixture"])
def test_verify_passes(capsys, target):
    code, rep = run_json(capsys, "verify", target)
    assert code == 0
    assert rep["checks"] and all(c["passed"] for c in rep["checks"])


def test_verify_unknown_fixture(capsys):
    code, _ = run(capsys, "verify", "nosuchfixture")
    assert code == 2


def test_malcolmson(capsys):
    code, rep = run_json(capsys, "malcolmson", "eval", DATA / "x2_yx.alg", DATA / "x2_yx_y1.triple.json")
    assert code == 0 and rep["result"]["value"] == "y"
    code, rep = run_json(capsys, "malcolmson", "eq", DATA / "x2_yx.alg",
                         DATA / "x2_yx_x1.triple.json", DATA / "x2_yx_x2.triple.json")
    assert code == 0 and rep["result"]["verdict"] == "Equal(certified)"
    code, rep = run_json(capsys, "malcolmson", "eq", DATA / "free2.alg",
                         DATA / "free2_x1.triple.json", DATA / "free2_y1.triple.json")
    assert rep["result"]["verdict"] == "NotEqual(certified)"


def test_tor(capsys):
    code, rep = run_json(capsys, "tor", "--algebra", DATA / "dual_numbers.json", "-n", 3)
    assert code == 0
    assert rep["result"]["tor_dims"] == [2, 0, 2]
    assert rep["result"]["matrix_tor_dims"] == [18, 0, 18]
    code, rep = run_json(capsys, "tor", "--algebra", "trunc3", "-n", 3, "--field", "7")
    assert rep["result"]["tor_dims"] == [3, 0, 24]


def test_fixtures_listing(capsys):
    code, rep = run_json(capsys, "fixtures")
    assert code == 0
    assert [f["name"] for f in rep["result"]["fixtures"]] == ["weyl4", "subtree4", "dual_numbers"]
    assert len(list_fixtures()) == 3


def test_deterministic_modulo_wall_time(capsys):
    args = ("verify", DATA / "x2_yx.alg")
    _, a = run_json(capsys, *args)
    _, b = run_json(capsys, *args)
    a.pop("wall_time"), b.pop("wall_time")
    assert a == b


def test_digest_depends_on_file_contents(capsys, tmp_path):
    f = tmp_path / "p.alg"
    f.write_text("k<x | x*x>")
    _, a = run_json(capsys, "parse", f)
    f.write_text("k<x | x*x*x>")
    _, b = run_json(capsys, "parse", f)
    assert a["inputs_digest"] != b["inputs_digest"]


def test_out_file_and_pretty(capsys, tmp_path):
    out = tmp_path / "r.json"
    code, text = run(capsys, "tor", "--algebra", "dual_numbers", "--out", out, "--pretty")
    assert code == 0
    assert json.loads(out.read_text())["result"]["tor_dims"] == [2, 0, 2]
    assert "tor_dims" in text


@pytest.mark.parametrize("argv", [
    ["parse", "/nonexistent.alg"],
    ["tor", "--algebra", "nosuch"],
    ["tor", "--algebra", "k", "-n", "1"],
    ["verify", "x2_yx", "--field", "4"],
    [],
])
def test_usage_errors(capsys, argv):
    code = main([str(a) for a in argv]) if argv else _exit_code(lambda: main([]))
    assert code == 2


def _exit_code(fn):
    try:
        return fn()
    except SystemExit as e:
        return e.code


def test_bad_algebra_exit_code(capsys, tmp_path):
    f = tmp_path / "bad.json"
    t = [[[0, 0], [0, 0]], [[0, 0], [0, 0]]]
    f.write_text(json.dumps({"dim": 2, "basis": ["a", "b"], "table": t}))
    assert main(["tor", "--algebra", str(f)]) == 2


def test_degree_out_of_range_exit_code(capsys):
    assert main(["verify", str(DATA / "weyl.alg"), "--degree", "1"]) == 2


def test_failed_check_exit_code(capsys, monkeypatch):
    from quiverloc import torcalc
    monkeypatch.setattr(torcalc, "tor_dims", lambda S, n: [S.dim] + [1] * (n - 1))
    code, rep = run_json(capsys, "tor", "--algebra", "dual_numbers", "-n", 3)
    assert code == 1
    assert not {c["check"]: c for c in rep["checks"]}["tor_dims"]["passed"]
