import csv
import io
import json
import math
import os
import subprocess
import sys

import pytest

from murmur import cli

PKG_ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))


def run_cli(argv, capsys):
    code = cli.main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_nu_single_interval(capsys):
    code, out, _ = run_cli(["nu", "--E", "0.99", "1.01", "--tol", "1e-8"],
                           capsys)
    assert code == cli.EXIT_OK
    lines = out.strip().splitlines()
    assert lines[0] == "t,nu"
    t, v = lines[1].split(",")
    assert float(t) == 1.01
    assert float(v) == pytest.approx(6.0 / math.pi ** 2, abs=1e-8)


def test_nu_grid_and_json(capsys):
    args = ["nu", "--grid", "0.5", "1.0", "0.5", "--tol", "1e-6"]
    code, out, _ = run_cli(args, capsys)
    assert code == cli.EXIT_OK
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [float(r["t"]) for r in rows] == [0.5, 1.0]

    code, jout, _ = run_cli(args + ["--format", "json"], capsys)
    assert code == cli.EXIT_OK
    doc = json.loads(jout)
    assert len(doc) == 2
    for r, d in zip(rows, doc):
        assert float(r["nu"]) == d["nu"]


def test_trace_single_prime(capsys):
    spec_args = ["--R", "100", "--H", "10", "--h", "2"]
    code, out, _ = run_cli(["trace", "--p", "101"] + spec_args, capsys)
    assert code == cli.EXIT_OK
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 1
    r = rows[0]
    assert r["p"] == "101"
    total = (float(r["hyperbolic"]) + float(r["elliptic"])
             + float(r["divisor_log"]) + float(r["divisor_int"])
             + float(r["parabolic"]) + float(r["lambda"]) + float(r["square"]))
    assert float(r["total"]) == pytest.approx(total, rel=1e-12)
    assert float(r["spectral"]) == pytest.approx(
        total - float(r["identity"]), rel=1e-9, abs=1e-12)


def test_trace_range_matches_singles(capsys, tmp_path):
    spec_args = ["--R", "100", "--H", "10", "--h", "2",
                 "--cache", str(tmp_path / "c.csv")]
    code, out, _ = run_cli(["trace", "--p-range", "100", "120"] + spec_args,
                           capsys)
    assert code == cli.EXIT_OK
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [r["p"] for r in rows] == ["101", "103", "107", "109", "113"]
    code, single, _ = run_cli(["trace", "--p", "107"] + spec_args, capsys)
    srow = list(csv.DictReader(io.StringIO(single)))[0]
    assert srow == rows[2]


def test_trace_general_n(capsys):
    spec_args = ["--R", "100", "--H", "10", "--h", "2"]
    code, out, _ = run_cli(["trace", "--n", "-101"] + spec_args, capsys)
    assert code == cli.EXIT_OK
    gen = list(csv.DictReader(io.StringIO(out)))[0]
    code, out2, _ = run_cli(["trace", "--p", "101"] + spec_args, capsys)
    fast = list(csv.DictReader(io.StringIO(out2)))[0]
    assert float(gen["spectral"]) == pytest.approx(float(fast["spectral"]),
                                                   rel=1e-8)


def test_config_file_and_flag_override(capsys, tmp_path):
    cfgfile = tmp_path / "run.toml"
    cfgfile.write_text('R = 100.0\nH = 10.0\nh = 2.0\ntol = 1e-6\n')
    code, out, _ = run_cli(["--config", str(cfgfile), "nu", "--E", "0", "1"],
                           capsys)
    assert code == cli.EXIT_OK
    # flag overrides the file value
    code2, out2, _ = run_cli(["--config", str(cfgfile), "nu", "--E", "0", "1",
                              "--tol", "1e-8"], capsys)
    assert code2 == cli.EXIT_OK
    assert float(out2.splitlines()[1].split(",")[1]) == pytest.approx(
        float(out.splitlines()[1].split(",")[1]), abs=1e-5)


def test_config_unknown_key_is_config_error(capsys, tmp_path):
    cfgfile = tmp_path / "bad.toml"
    cfgfile.write_text("R = 100.0\nbogus_knob = 3\n")
    code, _, err = run_cli(["--config", str(cfgfile), "nu", "--E", "0", "1"],
                           capsys)
    assert code == cli.EXIT_CONFIG
    assert "bogus_knob" in err


def test_domain_error_exit_code(capsys):
    # h > H violates the window constraints
    code, _, err = run_cli(["trace", "--p", "101", "--R", "100", "--H", "2",
                            "--h", "3"], capsys)
    assert code == cli.EXIT_CONFIG
    assert err.strip()


def test_parse_error_exit_code(capsys, tmp_path):
    bad = tmp_path / "cache.csv"
    bad.write_text("# wrong header\n")
    code, _, err = run_cli(["trace", "--p", "101", "--R", "100", "--H", "10",
                            "--h", "2", "--cache", str(bad)], capsys)
    assert code == cli.EXIT_PARSE


def test_check_command(capsys):
    code, out, _ = run_cli(["check"], capsys)
    assert code == cli.EXIT_OK
    lines = [l for l in out.strip().splitlines() if l]
    assert len(lines) >= 5
    assert all(l.startswith("PASS") for l in lines)


def test_check_only_filter(capsys):
    code, out, _ = run_cli(["check", "--only", "kronecker"], capsys)
    assert code == cli.EXIT_OK
    lines = out.strip().splitlines()
    assert lines and all("kronecker" in l for l in lines)


def test_figure_small_run_deterministic(capsys, tmp_path):
    args = ["figure", "--R", "300", "--H", "30", "--h", "5",
            "--grid", "0.4", "0.8", "0.4", "--tol", "1e-6",
            "--l-eps", "1e-3"]
    code, out1, _ = run_cli(args + ["--cache", str(tmp_path / "c1.csv")],
                            capsys)
    assert code == cli.EXIT_OK
    assert out1.splitlines()[0] == "t,nu,lhs_scaled,numerator,denominator,N,R,H,h"
    # warm cache + different thread count must be bit-identical
    code, out2, _ = run_cli(args + ["--cache", str(tmp_path / "c1.csv"),
                                    "--threads", "4"], capsys)
    assert code == cli.EXIT_OK
    assert out1 == out2
    rows = list(csv.DictReader(io.StringIO(out1)))
    assert [float(r["t"]) for r in rows] == [0.4, 0.8]
    for r in rows:
        assert math.isfinite(float(r["lhs_scaled"]))


def test_output_file_flag(capsys, tmp_path):
    dest = tmp_path / "out.csv"
    code, out, _ = run_cli(["nu", "--E", "0", "1", "--tol", "1e-6",
                            "-o", str(dest)], capsys)
    assert code == cli.EXIT_OK
    assert out == ""
    assert dest.read_text().startswith("t,nu\n")


def test_console_script_runs():
    proc = subprocess.run([sys.executable, "-m", "murmur.cli", "nu",
                           "--E", "0", "1", "--tol", "1e-6"],
                          capture_output=True, text=True, cwd=PKG_ROOT)
    assert proc.returncode == 0
    assert proc.stdout.startswith("t,nu\n")
