import json
import math

import numpy as np
import pytest

from conftest import trivial_problem
from multipoint.cli import main
from multipoint.model import (OUTER_RIGHT, grid_to_doc, problem_to_dict, sampled)
from multipoint.reporting import json_dumps

TWO_PI = 2.0 * math.pi


@pytest.fixture()
def problem_file(tmp_path):
    path = tmp_path / "problem.json"
    path.write_text(json_dumps(problem_to_dict(trivial_problem())))
    return str(path)


def test_spectrum_subcommand_writes_report(problem_file, tmp_path, capsys):
    out = tmp_path / "report.json"
    csv = tmp_path / "report.csv"
    rc = main(["spectrum", "--problem", problem_file, "--window", "-7", "7",
               "--out", str(out), "--csv", str(csv)])
    assert rc == 0
    doc = json.loads(out.read_text())
    assert [e["lambda"] for e in doc["entries"]] == pytest.approx(
        [-TWO_PI, 0.0, TWO_PI], abs=1e-12)
    assert doc["classification"]
    header, *rows = csv.read_text().strip().split("\n")
    assert header == "lambda,theta,branch_n,mode_j,ode_residual,bc_residual"
    assert len(rows) == 3


def test_spectrum_norm_probe_appends_evidence(problem_file, tmp_path):
    out = tmp_path / "report.json"
    rc = main(["spectrum", "--problem", problem_file, "--window", "-1", "1",
               "--norm-probe", "1,0.5", "--out", str(out)])
    assert rc == 0
    doc = json.loads(out.read_text())
    assert [p["lambda_i"] for p in doc["probes"]] == [1.0, 0.5]
    assert doc["probes"][0]["ratio"] == pytest.approx(0.5, abs=1e-3)
    assert doc["probes"][1]["ratio"] == pytest.approx(1.0, abs=1e-3)


def test_outputs_are_byte_identical_across_runs(problem_file, tmp_path):
    out1 = tmp_path / "r1.json"
    out2 = tmp_path / "r2.json"
    for out in (out1, out2):
        rc = main(["spectrum", "--problem", problem_file, "--window", "-7", "7",
                   "--norm-probe", "1", "--out", str(out)])
        assert rc == 0
    assert out1.read_bytes() == out2.read_bytes()


def test_resolvent_subcommand(problem_file, tmp_path):
    p = trivial_problem()
    f3 = sampled(p, OUTER_RIGHT, lambda t: np.exp(-(t - p.intervals.a3)))
    fpath = tmp_path / "f3.json"
    fpath.write_text(json_dumps(grid_to_doc(f3)))
    out = tmp_path / "sol.json"
    rc = main(["resolvent", "--problem", problem_file, "--lambda", "0", "1",
               "--f", str(fpath), "--out", str(out)])
    assert rc == 0
    doc = json.loads(out.read_text())
    assert doc["lambda"] == [0.0, 1.0]
    assert doc["f1star"][0] == pytest.approx([0.0, 0.5], abs=1e-5)
    assert doc["residual_ode"] <= 1e-4
    assert doc["u2"] is not None  # zero inner part still reported


def test_resolvent_rejects_real_lambda(problem_file, tmp_path, capsys):
    p = trivial_problem()
    f3 = sampled(p, OUTER_RIGHT, lambda t: np.exp(-(t - p.intervals.a3)))
    fpath = tmp_path / "f3.json"
    fpath.write_text(json_dumps(grid_to_doc(f3)))
    rc = main(["resolvent", "--problem", problem_file, "--lambda", "1", "0",
               "--f", str(fpath)])
    assert rc == 1
    assert "error:" in capsys.readouterr().err


def test_verify_subcommand(problem_file, tmp_path):
    out = tmp_path / "verify.json"
    rc = main(["verify", "--problem", problem_file, "--pairs", "25",
               "--out", str(out)])
    assert rc == 0
    doc = json.loads(out.read_text())
    assert doc["pass"] is True
    assert doc["round_trip_max"] <= 1e-12


def test_oracle_compare_subcommand(problem_file, tmp_path):
    out = tmp_path / "oracle.json"
    rc = main(["oracle-compare", "--problem", problem_file,
               "--window", "-7", "7", "--tol", "1e-6",
               "--samples", "1001", "--rk4-steps", "256", "--out", str(out)])
    assert rc == 0
    doc = json.loads(out.read_text())
    assert doc["pass"] is True and doc["matched"] == 3


def test_example_pde_subcommand(tmp_path):
    out = tmp_path / "example.json"
    rc = main(["example-pde", "--modes", "2", "--psi", "0.4", "--phi", "1.0",
               "--window", "0", "20", "--out", str(out)])
    assert rc == 0
    doc = json.loads(out.read_text())
    expected = sorted(
        ((n * math.pi) ** 2 - 0.4) % TWO_PI + TWO_PI * k
        for n in range(2) for k in range(4)
        if 0 <= ((n * math.pi) ** 2 - 0.4) % TWO_PI + TWO_PI * k <= 20)
    got = [e["lambda"] for e in doc["entries"]]
    assert got == pytest.approx(expected, abs=1e-9)
    assert doc["problem"]["dim"] == 2


def test_unknown_flag_rejected_with_usage(problem_file, capsys):
    rc = main(["spectrum", "--problem", problem_file, "--window", "-1", "1",
               "--bogus"])
    assert rc == 1
    err = capsys.readouterr().err
    assert "usage" in err


def test_unknown_subcommand_rejected(capsys):
    assert main(["frobnicate"]) == 1


def test_invalid_problem_file_gives_validation_exit(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    rc = main(["spectrum", "--problem", str(bad), "--window", "-1", "1"])
    assert rc == 1


def test_oracle_compare_mismatch_exits_2(tmp_path, capsys):
    # two eigenvalue chains 0.05 apart with a sweep too coarse to separate
    # them: the sweep finds one root per pair, oracle-compare reports the
    # unmatched entries and exits with the numerical-failure code
    from multipoint.model import IntervalConfig, make_problem
    iv = IntervalConfig(a1=-1.0, a2=0.0, b2=1.0, a3=2.0)
    p = make_problem(2, iv, np.zeros((2, 2)), np.diag([1.0, 1.05]),
                     np.zeros((2, 2)), np.eye(2), np.eye(2))
    ppath = tmp_path / "clustered.json"
    ppath.write_text(json_dumps(problem_to_dict(p)))
    out = tmp_path / "oracle.json"
    rc = main(["oracle-compare", "--problem", str(ppath),
               "--window", "-7", "7", "--tol", "1e-6",
               "--samples", "31", "--rk4-steps", "256", "--out", str(out)])
    assert rc == 2
    doc = json.loads(out.read_text())
    assert doc["pass"] is False
    assert doc["unmatched_main"]


def test_oracle_compare_tol_defaults_to_quadrature_rtol(tmp_path):
    # a problem whose quadrature_rtol is loose enough to match anything in
    # the window demonstrates the tolerance flows from the problem file
    doc = problem_to_dict(trivial_problem())
    doc["tolerances"]["quadrature_rtol"] = 1e-3
    ppath = tmp_path / "p.json"
    ppath.write_text(json_dumps(doc))
    out = tmp_path / "oc.json"
    rc = main(["oracle-compare", "--problem", str(ppath), "--window", "-7", "7",
               "--samples", "1001", "--rk4-steps", "256", "--out", str(out)])
    assert rc == 0
    assert json.loads(out.read_text())["tol"] == 1e-3
