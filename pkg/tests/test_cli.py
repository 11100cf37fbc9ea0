"""Command-line behaviour and exit codes."""
import json
import subprocess
import sys

import pytest

from boundent.cli import main


def run(*args):
    return main([str(a) for a in args])


@pytest.fixture
def ex1(tmp_path):
    assert run("gen", "example1", "--epsilon", 0.2, "--out", tmp_path / "ex1") == 0
    return tmp_path / "ex1"


def test_gen_writes_state_and_certificate(ex1, capsys):
    state = json.loads((ex1 / "state.json").read_text())
    assert state["shape"] == [3, 3] and len(state["pairs"]) == 5
    assert len(json.loads((ex1 / "certificate.json").read_text())["families"]) == 5


def test_gen_6x6(tmp_path, capsys):
    assert run("gen", "example3", "--k", 2, "--epsilon", 0.1, "--out", tmp_path) == 0
    assert len(json.loads((tmp_path / "state.json").read_text())["pairs"]) == 22
    assert "22 eigenpairs" in capsys.readouterr().out


def test_gen_rejects_out_of_range_epsilon(tmp_path, capsys):
    assert run("gen", "example1", "--epsilon", 0.5, "--out", tmp_path) == 2
    assert "epsilon" in capsys.readouterr().err


def test_transform_and_certify(ex1, tmp_path):
    out = tmp_path / "t2"
    assert run("transform", ex1 / "state.json", "--theorem", 2, "--op", "P(4,6)", "--index", 4,
               "--cert", ex1 / "certificate.json", "--out", out) == 0
    data = json.loads((out / "transformed_state.json").read_text())
    assert data["construction"]["theorem"] == "T2" and data["construction"]["moved_index"] == 4
    report = tmp_path / "report.json"
    assert run("certify", out / "transformed_state.json", out / "transformed_certificate.json",
               "--out", report) == 0
    rep = json.loads(report.read_text())
    assert rep["conclusion"] == "BoundEntangled" and rep["report_version"] == 1


def test_transform_local_keeps_raw_pairs(ex1, tmp_path, capsys):
    out = tmp_path / "t1"
    assert run("transform", ex1 / "state.json", "--theorem", 1, "--op", "Q3(c=2)*P(1,2)", "--out", out) == 0
    data = json.loads((out / "transformed_state.json").read_text())
    assert data["normalized"] is True and data["construction"]["operator"] == "Q3(c=2.0)*P(1,2)"
    capsys.readouterr()
    assert run("invariants", out / "transformed_state.json", "--use-raw", "--convention", "raw") == 0
    table = json.loads(capsys.readouterr().out)
    assert table["Theta"][2][2] == pytest.approx(16.0)
    assert run("compare", ex1 / "state.json", out / "transformed_state.json", "--use-raw",
               "--convention", "raw") == 0
    assert json.loads(capsys.readouterr().out)["verdict"] == "Inequivalent"


def test_transform_precondition_exit_code(ex1, capsys):
    assert run("transform", ex1 / "state.json", "--theorem", 1, "--op", "Q1(c=2)*P(1,2)") == 3
    assert "i not in {m, n}" in capsys.readouterr().err
    assert run("transform", ex1 / "state.json", "--theorem", 2, "--op", "P(1,3)", "--index", 4) == 3


def test_input_errors(ex1, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run("certify", bad, ex1 / "certificate.json") == 2
    assert run("certify", tmp_path / "missing.json", ex1 / "certificate.json") == 2
    assert run("transform", ex1 / "state.json", "--theorem", 1, "--op", "X(1)") == 2
    assert run("transform", ex1 / "state.json", "--theorem", 2, "--op", "P(4,6)") == 2
    assert run("invariants", ex1 / "state.json", "--S", 1) == 2


def test_search_products(ex1, capsys):
    assert run("search-products", ex1 / "state.json") == 0
    data = json.loads(capsys.readouterr().out)
    assert {"supportA": [1, 2], "supportB": [1, 2]} in data["maximal"]


def test_global_flags_before_subcommand(ex1, tmp_path):
    report = tmp_path / "r.json"
    assert run("--seed", 5, "--tol-residual", 0.01, "certify", ex1 / "state.json", ex1 / "certificate.json",
               "--out", report) == 0
    rep = json.loads(report.read_text())
    assert rep["seed"] == 5 and rep["tolerances"]["residual_min"] == 0.01


def test_reproduce_bundle_and_exit_code(tmp_path, capsys):
    code = run("reproduce", 4, "--out", tmp_path)
    bundle = tmp_path / "example4"
    summary = json.loads((bundle / "summary.json").read_text())
    assert code == (0 if summary["passed"] else 1)
    text = (bundle / "summary.txt").read_text()
    assert "[PASS] transformed bound entangled" in text
    assert {"state.json", "transformed_state.json", "report.json", "comparison.json", "config.json"} <= {
        p.name for p in bundle.iterdir()}


def test_reproduce_logs_operator_reading_and_k1_cross_check(tmp_path, capsys):
    run("reproduce", 3, "--k", 1, "--out", tmp_path)
    text = (tmp_path / "example3" / "summary.txt").read_text()
    assert "[NOTE] operator reading" in text
    assert "[PASS] k=1 matches the 3x3 family" in text


def test_reproduce_reports_overrides(tmp_path, capsys):
    run("reproduce", 2, "--out", tmp_path)
    text = (tmp_path / "example2" / "summary.txt").read_text()
    assert "[OVERRIDE] derived-value override Theta[6][7]" in text


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "boundent", "--help"], capture_output=True, text=True)
    assert res.returncode == 0 and "reproduce" in res.stdout
