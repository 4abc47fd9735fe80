"""Command-line interface: outputs, schemas, exit codes, determinism."""

import json
import subprocess
import sys

import pytest

from bqdim import cli


def run_cli(argv, capsys):
    code = cli.main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_weyl_normal_form(capsys):
    code, out, _ = run_cli(["weyl", "normal-form", "--n", "3",
                            "--word", "1,2,3,2,1"], capsys)
    assert code == 0
    data = json.loads(out)
    assert data["schema"] == "bqdim/1"
    assert data["length"] == 5
    assert data["parts"][0]["eps"] == 0
    assert data["parts"][2] == {"eps": 2, "k": 1}


def test_weyl_dims(capsys):
    code, out, _ = run_cli(["weyl", "dims", "--n", "2", "--m", "2"], capsys)
    data = json.loads(out)
    assert code == 0 and data["quotient_dim"] == 7


def test_weyl_longest(capsys):
    code, out, _ = run_cli(["weyl", "longest", "--n", "2"], capsys)
    data = json.loads(out)
    assert code == 0 and data["length"] == 4
    code, out, _ = run_cli(["weyl", "longest", "--n", "2", "--indices", "2"],
                           capsys)
    data = json.loads(out)
    assert data["length"] == 3


def test_weyl_decompose(capsys):
    code, out, _ = run_cli(["weyl", "decompose", "--n", "2",
                            "--word", "2,1,2", "--indices", "2"], capsys)
    data = json.loads(out)
    assert code == 0
    assert data["lengths"] == [1, 2]


def test_malformed_word_is_usage_error(capsys):
    code, _, err = run_cli(["weyl", "normal-form", "--n", "2",
                            "--word", "1,x"], capsys)
    assert code == 2
    assert "malformed" in err


def test_out_of_range_letter_is_usage_error(capsys):
    code, _, err = run_cli(["weyl", "normal-form", "--n", "2",
                            "--word", "3"], capsys)
    assert code == 2


def test_rep_verify(capsys):
    code, out, _ = run_cli(["rep", "verify", "--n", "2", "--word", "1,2,1,2",
                            "--cutoff", "4"], capsys)
    data = json.loads(out)
    assert code == 0
    assert data["orthogonality_ok"]
    assert data["orthogonality_deviation"] < 1e-8


def test_rep_verify_word_comparison(capsys):
    code, out, _ = run_cli(["rep", "verify", "--n", "3", "--word", "1,2,1",
                            "--word2", "2,1,2", "--cutoff", "4"], capsys)
    data = json.loads(out)
    assert code == 0
    assert data["braid_equal"] is False
    assert data["braid_deviation"] > 0.1


def test_rep_verify_bad_torus(capsys):
    code, _, err = run_cli(["rep", "verify", "--n", "2", "--word", "1",
                            "--t", "2,0;1,0"], capsys)
    assert code == 2


def test_rep_entry_render(capsys):
    code, out, _ = run_cli(["rep", "entry", "--n", "3", "--word", "1,2,3,2,1",
                            "--k", "4", "--l", "4"], capsys)
    data = json.loads(out)
    assert code == 0
    assert data["operator"] == \
        "I (x) I (x) (I + -1*(1+q^2)*q^{2N}) (x) I (x) I"


def test_diagram_dot(capsys):
    code, out, _ = run_cli(["diagram", "dot", "--n", "3",
                            "--word", "1,2,3,2,1"], capsys)
    assert code == 0
    assert out.startswith("digraph")
    assert "M5_" in out


def test_diagram_paths(capsys):
    code, out, _ = run_cli(["diagram", "paths", "--n", "3",
                            "--word", "1,2,3,2,1", "--from", "1", "--to", "3"],
                           capsys)
    data = json.loads(out)
    assert code == 0 and data["count"] == 2
    code, _, _ = run_cli(["diagram", "paths", "--n", "3", "--word", "1",
                          "--from", "0", "--to", "3"], capsys)
    assert code == 2


def test_gkdim_module(capsys, tmp_path):
    csv_path = tmp_path / "series.csv"
    code, out, _ = run_cli(["gkdim", "module", "--n", "2", "--word", "1",
                            "--rmax", "6", "--csv", str(csv_path)], capsys)
    data = json.loads(out)
    assert code == 0
    assert data["ok"] and data["target"] == 1
    text = csv_path.read_text()
    assert text.splitlines()[0] == "r,d,lower,upper"
    assert len(text.splitlines()) == 8


def test_gkdim_module_with_torus_point(capsys):
    code, out, _ = run_cli(["gkdim", "module", "--n", "2", "--word", "1,2",
                            "--rmax", "4", "--t", "0,1;1,0"], capsys)
    data = json.loads(out)
    assert code == 0 and data["ok"] and data["target"] == 2


def test_gkdim_homogeneous(capsys):
    code, out, _ = run_cli(["gkdim", "homogeneous", "--n", "1", "--m", "1",
                            "--rmax", "3", "--probe", "3"], capsys)
    data = json.loads(out)
    assert code == 0
    assert data["target"] == 3 and data["ok"]


def test_gkdim_budget_exit_code_with_partial_series(capsys):
    code, out, _ = run_cli(["gkdim", "module", "--n", "2", "--word", "1,2",
                            "--rmax", "6", "--basis-cap", "5"], capsys)
    assert code == 3
    data = json.loads(out)
    assert data["error"] == "budget-exceeded"
    assert "budget-exceeded" in data["flags"]
    assert data["partial_series"][0] == [0, 1]


def test_determinism_across_threads(capsys, tmp_path):
    outputs = []
    for threads, name in ((1, "a.csv"), (4, "b.csv")):
        csv_path = tmp_path / name
        code, out, _ = run_cli(["--threads", str(threads), "gkdim", "module",
                                "--n", "2", "--word", "1,2", "--rmax", "5",
                                "--csv", str(csv_path)], capsys)
        assert code == 0
        outputs.append((out, csv_path.read_bytes()))
    assert outputs[0] == outputs[1]


def test_entry_point_runs():
    proc = subprocess.run([sys.executable, "-m", "bqdim.cli", "weyl", "dims",
                           "--n", "1", "--m", "1"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["group_dim"] == 3
