import csv
import io
import json
import subprocess
import sys

import pytest

from hardy_forge.cli import DEFAULT_SEED, main, resolve_threads


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def report(capsys, *argv):
    code, out, _ = run(capsys, *argv)
    return code, json.loads(out)


def test_constants_k5(capsys):
    code, rep = report(capsys, "constants", "--k", "5")
    assert code == 0
    assert set(rep) == {"config", "results", "summary"}
    assert [r["i"] for r in rep["results"]] == list(range(6))
    assert rep["results"][1]["gamma"] == "81/4"
    assert rep["summary"] == {"passed": 6, "failed": 0, "wall_ms": None}


def test_constants_csv_columns(capsys):
    code, out, _ = run(capsys, "constants", "--k", "2", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and len(rows) == 3
    assert list(rows[0])[:7] == ["k", "i", "xi", "alpha", "beta", "gamma", "gamma_printed"]
    assert rows[1]["gamma"] == "9/4" and rows[1]["gamma_printed"] == "33/16"


def test_identity(capsys):
    code, rep = report(capsys, "identity", "--k-max", "100")
    assert code == 0 and rep["summary"]["passed"] == 100


def test_verify_cor26(capsys):
    code, rep = report(capsys, "verify", "--id", "cor26", "--trials", "1000", "--seed", "7")
    res = rep["results"][0]
    assert code == 0
    assert res["min_margin"] >= 0
    assert rep["config"] == {"command": "verify", "id": "cor26", "seed": 7, "trials": 1000, "window": None}


def test_verify_input_file(capsys, tmp_path):
    f = tmp_path / "u.json"
    f.write_text(json.dumps({"lo": 1, "hi": 2, "values": [[1, "1/1", "0/1"], [2, "-1/2", "1/3"]]}))
    code, rep = report(capsys, "verify", "--id", "cor24", "--k", "1", "--input", str(f))
    assert code == 0 and rep["results"][0]["passed"]
    f.write_text(json.dumps({"lo": 0, "hi": 0, "values": [[0, "1/1", "0/1"]]}))
    code, rep = report(capsys, "verify", "--id", "hardy_11", "--input", str(f))
    assert code == 1
    assert rep["summary"]["failed"] == 1 and not rep["results"][0]["admissible"]


def test_lemma_and_parseval(capsys):
    code, rep = report(capsys, "lemma", "--which", "31", "--trials", "5")
    assert code == 0 and rep["summary"]["passed"] == 5
    code, rep = report(capsys, "parseval", "--trials", "5")
    assert code == 0 and rep["summary"]["failed"] == 0


def test_sharpness_csv(capsys):
    code, out, _ = run(capsys, "sharpness", "--id", "cor22", "--k", "1", "--beta-depth", "2", "--N", "100,1000", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0
    assert list(rows[0]) == ["beta", "N", "lhs", "rhs", "quotient", "gap"]
    assert len(rows) == 4


def test_spectrum(capsys):
    code, rep = report(capsys, "spectrum", "--id", "cor24", "--k", "2", "--N", "10,100,1000", "--extrapolate")
    assert code == 0
    assert [r["N"] for r in rep["results"]] == [10, 100, 1000]
    assert rep["summary"]["extrapolation"]["label"] == "estimate"
    code, out, _ = run(capsys, "spectrum", "--id", "thm28_even:m=1", "--k", "2", "--N", "10,20", "--format", "csv")
    assert out.splitlines()[0].startswith("N,lambda_min,paper_constant,gap")


@pytest.mark.parametrize(
    "argv",
    [
        ["verify", "--id", "nope"],
        ["verify", "--id", "cor24"],
        ["verify", "--id", "hardy_11", "--trials", "0"],
        ["verify", "--id", "hardy_11", "--window", "5", "1"],
        ["verify", "--id", "hardy_11", "--input", "/no/such/file"],
        ["spectrum", "--id", "cor26", "--N", "100,10"],
        ["spectrum", "--id", "cor26", "--tol", "0"],
        ["sharpness", "--id", "cor22", "--k", "1", "--betas", "-0.4"],
        ["constants", "--k", "0"],
        ["thm99"],
        ["constants"],
    ],
)
def test_invalid_config_exits_2(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 2 and out == ""


def test_threads_resolution(monkeypatch):
    monkeypatch.delenv("HARDY_FORGE_THREADS", raising=False)
    assert resolve_threads(3) == 3
    monkeypatch.setenv("HARDY_FORGE_THREADS", "2")
    assert resolve_threads(None) == 2
    assert resolve_threads(5) == 5


def test_reports_are_byte_identical_across_threads(capsys, monkeypatch):
    argv = ["verify", "--id", "thm28_even:m=1,k=3", "--trials", "300"]
    _, a, _ = run(capsys, *argv, "--threads", "1")
    _, b, _ = run(capsys, *argv, "--threads", "4")
    monkeypatch.setenv("HARDY_FORGE_THREADS", "2")
    _, c, _ = run(capsys, *argv)
    assert a == b == c
    assert json.loads(a)["config"]["seed"] == DEFAULT_SEED
    assert "threads" not in json.loads(a)["config"]


def test_json_round_trip(capsys):
    _, out, _ = run(capsys, "spectrum", "--id", "hardy_11", "--N", "10,100")
    rep = json.loads(out)
    assert json.dumps(rep, indent=2) + "\n" == out


def test_output_file_and_timing(capsys, tmp_path):
    target = tmp_path / "r.json"
    code, out, _ = run(capsys, "constants", "--k", "3", "--output", str(target), "--timing")
    assert code == 0 and out == ""
    rep = json.loads(target.read_text())
    assert rep["summary"]["wall_ms"] >= 0
    assert [p.name for p in tmp_path.iterdir()] == ["r.json"]


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "hardy_forge", "constants", "--k", "1"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["results"][1]["gamma"] == "1/4"
