"""Command-line interface: parsing, file formats, manifests, exit codes."""

import math

import numpy as np
import pytest

from cavity_bell.cli import fmt, main, parse_angle, parse_grid, parse_value_list


def read(path):
    return path.read_text(encoding="utf-8")


def keyvalues(text):
    out = {}
    for line in text.strip().splitlines():
        key, _, value = line.partition(" = ")
        out[key] = value
    return out


def test_parse_angle():
    assert parse_angle("1.25") == 1.25
    assert parse_angle("pi") == math.pi
    assert parse_angle("-pi") == -math.pi
    assert parse_angle("+pi") == math.pi
    assert parse_angle("0.25pi") == 0.25 * math.pi
    assert parse_angle("0.5 pi") == 0.5 * math.pi
    assert parse_angle("2*pi") == 2 * math.pi
    assert parse_angle("-0.3pi") == -0.3 * math.pi
    with pytest.raises(ValueError):
        parse_angle("abc")


def test_parse_grid():
    assert parse_grid("0:1:0.5") == [0.0, 0.5, 1.0]
    assert len(parse_grid("0:1:0.05")) == 21
    with pytest.raises(ValueError):
        parse_grid("0:1")
    with pytest.raises(ValueError):
        parse_grid("0:1:-0.5")
    with pytest.raises(ValueError):
        parse_grid("1:0:0.5")
    assert parse_value_list("-0.01,0,0.01") == [-0.01, 0.0, 0.01]
    assert parse_value_list("-0.02:0.02:0.02") == [-0.02, 0.0, 0.02]


def test_fmt_normalizes_zero():
    assert fmt(-0.0) == "0"
    assert fmt(1 / 3) == "0.333333333333"


def test_scan_rows_and_manifest(tmp_path):
    out = tmp_path / "scan.csv"
    rc = main(["scan", "maximal", "--grid", "0:1:0.25", "--out", str(out)])
    assert rc == 0
    lines = read(out).splitlines()
    assert lines[0] == "G,s_b_analytic,s_b_operator"
    values = [[float(cell) for cell in line.split(",")] for line in lines[1:]]
    want = [math.sqrt(2), 1.7678, 2.1213, 2.4749, 2.8284]
    assert len(values) == 5
    for row, target in zip(values, want):
        assert abs(row[1] - target) < 5e-4
        assert abs(row[1] - row[2]) < 1e-9
    manifest = keyvalues(read(tmp_path / "scan.csv.manifest"))
    assert manifest["command"] == "scan"
    assert manifest["param.preset"] == "maximal"
    assert manifest["seed"] == "12345"
    assert manifest["output"] == str(out)


def test_scan_wide_endpoint(tmp_path):
    out = tmp_path / "wide.csv"
    assert main(["scan", "wide", "--grid", "1:1:1", "--out", str(out)]) == 0
    row = read(out).splitlines()[1].split(",")
    assert abs(float(row[1]) - 2.5) < 1e-12
    assert abs(float(row[2]) - 2.5) < 1e-9


def test_scan_threshold_row(tmp_path):
    out = tmp_path / "thr.csv"
    g = math.sqrt(2) - 1
    assert main(["scan", "maximal", "--grid", f"{g}:{g}:1", "--out", str(out)]) == 0
    row = read(out).splitlines()[1].split(",")
    assert abs(float(row[1]) - 2.0) < 1e-9
    assert abs(float(row[2]) - 2.0) < 1e-9


def test_pscan_argmax(tmp_path):
    out = tmp_path / "pscan.csv"
    rc = main(["pscan", "maximal", "--eta", "1", "--step", "0.01", "--out", str(out)])
    assert rc == 0
    manifest = keyvalues(read(tmp_path / "pscan.csv.manifest"))
    assert manifest["result.p_star"] == "0.5"
    lines = read(out).splitlines()
    assert lines[0] == "p,s_b"
    assert len(lines) == 102
    # scan values are symmetric about p = 1/2
    values = [float(line.split(",")[1]) for line in lines[1:]]
    assert max(abs(a - b) for a, b in zip(values, reversed(values))) < 1e-9


def test_covariance_report(tmp_path):
    out = tmp_path / "cov.txt"
    rc = main(
        ["covariance", "--p1", "0.5", "--p2", "0.5", "--theta1", "0", "--theta2", "0",
         "--eta", "1", "--out", str(out)]
    )
    assert rc == 0
    report = keyvalues(read(out))
    assert float(report["covariance_analytic"]) == pytest.approx(-1.0, abs=1e-12)
    assert float(report["covariance_operator"]) == pytest.approx(-1.0, abs=1e-12)
    assert float(report["e1_analytic"]) == 0.0


def test_covariance_vanishes_without_entanglement(tmp_path):
    out = tmp_path / "cov0.txt"
    assert main(["covariance", "--eta", "0", "--p1", "0.4", "--p2", "0.7",
                 "--theta1", "0.3", "--theta2", "1.1", "--out", str(out)]) == 0
    report = keyvalues(read(out))
    assert abs(float(report["covariance_analytic"])) < 1e-12


def test_covariance_one_photon_pair(tmp_path):
    out = tmp_path / "cov1.txt"
    assert main(["covariance", "--eta", "1", "--p1", "1", "--p2", "1",
                 "--theta1", "0", "--theta2", "0", "--out", str(out)]) == 0
    report = keyvalues(read(out))
    assert float(report["covariance_analytic"]) == pytest.approx(1.0, abs=1e-12)


def test_generate_report(tmp_path):
    out = tmp_path / "gen.txt"
    rc = main(["generate", "--eta", "1", "--p1", "0.5", "--p2", "0.5",
               "--theta1", "0", "--theta2", "0", "--out", str(out)])
    assert rc == 0
    report = keyvalues(read(out))
    assert report["fidelity"] == "1"
    assert report["prob_down_down"] == "1"


def test_generate_with_pi_angles(tmp_path):
    out = tmp_path / "gen2.txt"
    rc = main(["generate", "--eta", "0.7", "--p1", "0.3", "--p2", "0.8",
               "--theta1", "0.25pi", "--theta2=-0.3pi", "--out", str(out)])
    assert rc == 0
    report = keyvalues(read(out))
    assert float(report["fidelity"]) == pytest.approx(1.0, abs=1e-12)
    assert float(report["theta2"]) == pytest.approx(-0.3 * math.pi, abs=1e-12)


def test_simulate_report_and_reproducibility(tmp_path):
    out_a = tmp_path / "a.txt"
    out_b = tmp_path / "b.txt"
    args = ["simulate", "maximal", "--eta", "1", "--shots", "2000", "--seed", "42"]
    assert main(args + ["--out", str(out_a)]) == 0
    assert main(args + ["--out", str(out_b)]) == 0
    assert read(out_a) == read(out_b)
    report = keyvalues(read(out_a))
    s_b_hat = float(report["s_b_hat"])
    std_error = float(report["std_error"])
    assert abs(s_b_hat - 2 * math.sqrt(2)) < 4 * std_error
    assert report["discarded_shots"] == "0"
    assert float(report["setting.1.correlation"]) < 0
    assert report["setting.4.retained"] == "2000"
    manifest = keyvalues(read(tmp_path / "a.txt.manifest"))
    assert manifest["result.s_b_hat"] == report["s_b_hat"]


def test_simulate_with_losses(tmp_path):
    out = tmp_path / "lossy.txt"
    rc = main(["simulate", "maximal", "--shots", "4000", "--alpha", "0.8",
               "--seed", "7", "--out", str(out)])
    assert rc == 0
    report = keyvalues(read(out))
    assert int(report["discarded_shots"]) > 0
    assert report["alpha_above_threshold"] == "false"
    retained = int(report["setting.1.retained"])
    assert abs(retained - 4000 * 0.64) < 4 * math.sqrt(4000 * 0.64 * 0.36)


def test_sensitivity_table(tmp_path):
    out = tmp_path / "sens.csv"
    rc = main(["sensitivity", "maximal", "--eta", "1",
               "--epsilons=-0.01,0,0.01", "--out", str(out)])
    assert rc == 0
    lines = read(out).splitlines()
    assert lines[0] == "epsilon,fidelity,s_b"
    rows = [line.split(",") for line in lines[1:]]
    assert float(rows[1][1]) == 1.0
    # the file carries 12 significant digits
    assert float(rows[1][2]) == pytest.approx(2 * math.sqrt(2), abs=1e-10)
    assert rows[0][1] == rows[2][1]
    assert rows[0][2] == rows[2][2]


def test_error_exit_codes(tmp_path):
    out = str(tmp_path / "x")
    assert main(["simulate", "maximal", "--shots", "50", "--out", out]) == 1
    assert main(["scan", "maximal", "--grid", "0:2:0.5", "--out", out]) == 1
    assert main(["scan", "maximal", "--grid", "0:1:0.5", "--format", "keyvalue",
                 "--out", out]) == 1
    assert main(["pscan", "maximal", "--step", "0.3", "--out", out]) == 1
    with pytest.raises(SystemExit):
        main(["scan", "unknown-preset", "--out", out])
    with pytest.raises(SystemExit):
        main(["scan", "maximal"])  # --out is required


def test_manifest_reruns_are_byte_identical(tmp_path):
    out_a = tmp_path / "m1.csv"
    out_b = tmp_path / "m2.csv"
    argv = ["scan", "maximal", "--grid", "0:1:0.1", "--theta", "0.3"]
    assert main(argv + ["--out", str(out_a)]) == 0
    assert main(argv + ["--out", str(out_b)]) == 0
    assert read(out_a) == read(out_b)
    # manifests differ only in the output path line
    m_a = [l for l in read(tmp_path / "m1.csv.manifest").splitlines() if "output" not in l]
    m_b = [l for l in read(tmp_path / "m2.csv.manifest").splitlines() if "output" not in l]
    assert m_a == m_b
