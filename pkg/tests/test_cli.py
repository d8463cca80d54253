import io
import runpy
import json
import shutil
import subprocess
from pathlib import Path

import jsonschema
import pytest

from mcsc import load_bundled
from mcsc.cli import run
from mcsc.parsing import _schema


@pytest.fixture(scope="module")
def files(tmp_path_factory):
    d = tmp_path_factory.mktemp("inputs")
    for name in ("robots.json", "example1.mcs", "example2.mcs"):
        (d / name).write_text(load_bundled(name), encoding="utf-8")
    profb = load_bundled("example1.mcs").replace("profA.", "profA.\n    profB.")
    (d / "profb.mcs").write_text(profb, encoding="utf-8")
    (d / "broken.mcs").write_text("context c { a :- }", encoding="utf-8")
    return d


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run([str(a) for a in argv], out, err)
    return code, out.getvalue(), err.getvalue()


def as_json(*argv):
    code, out, _ = call(*argv, "--format", "json")
    report = json.loads(out)
    jsonschema.validate(report, _schema("report.schema.json"))
    return code, report


def test_solve_classical(files):
    code, out, _ = call("solve", files / "robots.json")
    assert code == 0
    assert "C0: g_1 <- ag_4 via p_12; g_2 <- ag_2 via p_21; g_3 <- ag_1 via p_31; " \
           "g_4 <- ag_3 via p_41" in out
    assert "C1: g_1 <- ag_1 via p_11" in out


def test_solve_possibilistic_json(files):
    code, report = as_json("solve", files / "robots.json", "--mode", "possibilistic")
    assert code == 0 and report["consistent"]
    c0 = report["coalitions"][0]["assignments"]
    assert [a["necessity"] for a in c0] == ["0.969", "0.96", "0.967", "0.975"]


@pytest.mark.parametrize("metric,order,first", [
    ("ws", ["C0", "C1"], "0.96775"), ("wp", ["C0", "C1"], None),
    ("topsis", ["C0", "C1"], "1.0"), ("cost", ["C0", "C1"], "81"),
    ("conviviality", ["C1", "C0"], "0.00127"),
])
def test_rank_metrics(files, metric, order, first):
    code, report = as_json("rank", files / "robots.json", "--mode", "possibilistic",
                           "--metric", metric)
    assert code == 0
    entries = report["ranking"]["entries"]
    assert [e["alternative"] for e in entries] == order
    if first is not None:
        assert entries[0]["score"] == first


def test_rank_with_weights(files):
    code, report = as_json("rank", files / "robots.json", "--mode", "possibilistic",
                           "--metric", "ws", "--weights", "g_1=0.4,g_2=0.1,g_3=0.1,g_4=0.4")
    assert code == 0
    assert [e["score"] for e in report["ranking"]["entries"]] == ["0.9703", "0.9682"]
    code, _, err = call("rank", files / "robots.json", "--metric", "ws", "--weights", "g_1")
    assert code == 1 and "weights must look like" in err


def test_check_example1(files):
    code, out, _ = call("check", files / "example1.mcs")
    assert code == 0
    assert out.startswith("S0 = (c1: {centralizedComputing, corba, sensors}; "
                          "c2: {middleware, profA}; c3: {})")
    code, out, _ = call("check", files / "example2.mcs", "--mode", "possibilistic")
    assert "(centralizedComputing, 0.7)" in out and "(middleware, 0.9)" in out


def test_check_inconsistent_exit_code(files):
    code, out, _ = call("check", files / "profb.mcs")
    assert code == 2
    assert out.splitlines()[0] == "INCONSISTENT"
    code, report = as_json("check", files / "profb.mcs")
    assert code == 2 and report["consistent"] is False and report["equilibria"] == []


def test_errors_exit_one(files):
    code, _, err = call("check", files / "broken.mcs")
    assert code == 1 and err.startswith("mcsc: error: 1:")
    code, _, err = call("check", files / "missing.mcs")
    assert code == 1
    assert call("frobnicate")[0] == 1
    assert call("--help")[0] == 0


def test_max_atoms_option_and_environment(files, monkeypatch):
    code, _, err = call("check", files / "example1.mcs", "--max-atoms", "2")
    assert code == 1 and "bound is 2" in err
    monkeypatch.setenv("MCSC_MAX_ATOMS", "2")
    assert call("check", files / "example1.mcs")[0] == 1
    assert call("check", files / "example1.mcs", "--max-atoms", "30")[0] == 0
    monkeypatch.setenv("MCSC_MAX_ATOMS", "lots")
    code, _, err = call("check", files / "example1.mcs")
    assert code == 1 and "MCSC_MAX_ATOMS" in err


def test_emit_options(files):
    code, report = as_json("solve", files / "robots.json", "--emit-mcs", "--emit-dot")
    assert code == 0
    assert "context ag_1" in report["mcs"]
    assert set(report["dot"]) == {"C0", "C1"}
    assert report["dot"]["C0"].startswith("digraph C0 {")


def test_output_is_deterministic(files):
    argv = ("rank", files / "robots.json", "--mode", "possibilistic", "--metric", "topsis",
            "--format", "json", "--emit-dot")
    assert call(*argv)[1] == call(*argv)[1]


@pytest.mark.skipif(shutil.which("mcsc") is None, reason="console script not installed")
def test_console_script(files):
    first = subprocess.run(["mcsc", "check", str(files / "profb.mcs")], capture_output=True,
                           text=True, timeout=60)
    second = subprocess.run(["mcsc", "check", str(files / "profb.mcs")], capture_output=True,
                            text=True, timeout=60)
    assert first.returncode == 2 and first.stdout.startswith("INCONSISTENT")
    assert first.stdout == second.stdout


@pytest.mark.parametrize("name", ["robots_walkthrough", "article_classification", "ranking"])
def test_demos_run(name, capsys):
    demos = Path(__file__).resolve().parent.parent / "demos"
    runpy.run_path(str(demos / f"{name}.py"), run_name="__main__")
    assert capsys.readouterr().out
