import csv
import io
import json
import subprocess
import sys

import numpy as np
import pytest

from simplicial_walks.cli import main

C4 = {"n": 4, "edges": [[0, 1], [1, 2], [2, 3], [0, 3]]}
K3 = {"n": 3, "edges": [[0, 1], [1, 2], [0, 2]]}
K4 = {"n": 4, "edges": [[0, 1], [0, 2], [0, 3], [1, 2], [1, 3], [2, 3]]}
C5 = {"n": 5, "edges": [[0, 1], [1, 2], [2, 3], [3, 4], [0, 4]]}
C5_CHORD = {"n": 5, "edges": C5["edges"] + [[0, 2]]}


@pytest.fixture
def graphs(tmp_path):
    paths = {}
    for name, doc in {"c4": C4, "k3": K3, "k4": K4, "c5": C5, "c5c": C5_CHORD}.items():
        p = tmp_path / f"{name}.json"
        p.write_text(json.dumps(doc))
        paths[name] = str(p)
    return paths


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_complex_info(capsys, graphs):
    code, out, _ = run(capsys, "complex", "info", "--input", graphs["k3"])
    assert code == 0 and json.loads(out)["counts"] == [3, 3, 1]


def test_spectrum_json(capsys, graphs):
    code, out, _ = run(capsys, "spectrum", "--input", graphs["c4"], "--k", "1")
    doc = json.loads(out)
    assert code == 0
    assert set(doc) >= {"k", "eigenvalues", "lambda_min_nonzero", "betti"}
    assert np.allclose(doc["eigenvalues"], [0, 2, 2, 4]) and doc["betti"] == 1


def test_global_flags_before_verb(capsys, graphs):
    code, out, _ = run(capsys, "--input", graphs["k3"], "--k", "1", "spectrum")
    assert code == 0 and json.loads(out)["betti"] == 0


def test_walk_simulate_csv(capsys, graphs):
    code, out, _ = run(capsys, "walk", "simulate", "--input", graphs["k3"], "--kind", "harmonic", "--k", "1", "--t", "1", "--start", "0,1")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and len(rows) == 2
    assert float(rows[1]["p[0,1]"]) == pytest.approx(0.6)
    assert float(rows[1]["pΘ"]) == pytest.approx(0.4)


def test_walk_simulate_lazy(capsys, graphs):
    code, out, _ = run(capsys, "walk", "simulate", "--input", graphs["k3"], "--kind", "up-ps17", "--t", "1", "--start", "0,1", "--output", "json")
    doc = json.loads(out)
    assert code == 0 and np.allclose(doc["expectation"][1], [0, 1, -1])


def test_walk_monte_carlo(capsys, graphs):
    code, out, _ = run(capsys, "walk", "simulate", "--input", graphs["c4"], "--kind", "down", "--t", "2", "--start", "1,0", "--trajectories", "2000")
    assert code == 0 and len(out.strip().splitlines()) == 4


def test_encode_circuit_report(capsys, graphs, tmp_path):
    report = tmp_path / "cost.json"
    code, out, _ = run(capsys, "encode", "--input", graphs["k3"], "--kind", "harmonic", "--tier", "circuit", "--report", str(report))
    block = np.loadtxt(io.StringIO(out), delimiter=",")
    assert code == 0 and np.allclose(block, 3 / (5 * np.sqrt(2)) * np.eye(3))
    assert json.loads(report.read_text())["total"] > 0


def test_encode_report_to_stderr(capsys, graphs):
    code, _, err = run(capsys, "encode", "--input", graphs["c4"], "--kind", "up", "--tier", "circuit")
    assert code == 0 and "total" in json.loads(err)


def test_project(capsys, graphs):
    code, out, _ = run(capsys, "project", "--input", graphs["c4"], "--target", "hk", "--epsilon", "1e-6")
    doc = json.loads(out)
    assert code == 0 and doc["error"] <= 1e-6 and doc["degree_used"] > 0


def test_betti_estimate(capsys, graphs):
    code, out, _ = run(capsys, "betti", "estimate", "--input", graphs["c4"], "--epsilon", "0.05")
    doc = json.loads(out)
    assert code == 0 and abs(doc["value"] - 0.25) <= 0.05


def test_persistent_estimate(capsys, graphs):
    code, out, _ = run(capsys, "persistent", "estimate", "--input", graphs["c4"], "--input-j", graphs["k4"], "--epsilon", "0.05")
    doc = json.loads(out)
    assert code == 0 and doc["truth"] == 0 and doc["value"] <= doc["budget"]


def test_verify(capsys, graphs, tmp_path):
    w = tmp_path / "w.json"
    w.write_text("[0.5, -0.5, 0.5, 0.5]")
    code, out, _ = run(capsys, "verify", "--input", graphs["c4"], "--g", "1", "--witness", str(w), "--epsilon", "1e-7")
    assert code == 0 and json.loads(out)["decision"] == "YES"
    code, out, _ = run(capsys, "verify", "--input", graphs["k3"], "--g", "3", "--witness", "1,0,0", "--epsilon", "1e-7")
    assert code == 0 and json.loads(out)["decision"] == "NO"


@pytest.mark.parametrize(
    "argv",
    [
        ["spectrum"],
        ["spectrum", "--input", "/nonexistent.json"],
        ["spectrum", "--input", "{c4}", "--k", "5"],
        ["verify", "--input", "{c4}", "--g", "1", "--witness", "1,1,1,1"],
        ["persistent", "estimate", "--input", "{k4}", "--input-j", "{c4}"],
        ["walk", "simulate", "--input", "{c4}", "--kind", "up-ps17", "--start", "0,1"],
        ["project", "--input", "{c4}", "--target", "hk", "--epsilon", "0.9"],
    ],
)
def test_precondition_exit_code(capsys, graphs, argv):
    argv = [a.format(**graphs) for a in argv]
    code, _, err = run(capsys, *argv)
    assert code == 2 and err


def test_gap_violation_exit_code(capsys, graphs):
    code, _, err = run(capsys, "persistent", "estimate", "--input", graphs["c5"], "--input-j", graphs["c5c"], "--gap", "0.25", "--epsilon", "0.1")
    assert code == 3 and "promise" in err


def test_bad_argument_exit_code(graphs):
    with pytest.raises(SystemExit) as exc:
        main(["walk", "simulate", "--input", graphs["c4"], "--kind", "sideways", "--start", "0,1"])
    assert exc.value.code == 2


def test_module_entry_point(graphs):
    res = subprocess.run([sys.executable, "-m", "simplicial_walks", "complex", "info", "--input", graphs["c4"], "--output", "csv"], capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout.splitlines()[0] == "k,count"
