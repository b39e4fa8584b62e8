import csv
import os
import subprocess
from pathlib import Path

import pytest

CLI = os.environ.get("CONTACTDD_CLI")
CONFIGS = Path(os.environ.get("CONTACTDD_CONFIGS", Path(__file__).parents[2] / "configs"))

pytestmark = pytest.mark.skipif(not CLI, reason="CONTACTDD_CLI not set")


def run(*args):
    return subprocess.run([CLI, *map(str, args)], capture_output=True, text=True)


def small_groove(tmp_path, extra=""):
    path = tmp_path / "groove.ini"
    path.write_text(
        "[problem]\nkind = groove\nfigure = 8\n"
        "[mesh]\ndensity = 8\n"
        "[sweep]\nc_list = 0.1, 0.05\ndensities = 8\ngammas = 0.4, 0.6\n"
        "schemes = active\neps_list = 1e-2, 1e-4\n" + extra
    )
    return path


def header(path):
    with open(path, newline="") as f:
        return next(csv.reader(f))


def test_solve_writes_history_and_profile(tmp_path):
    r = run("solve", small_groove(tmp_path), "--out", tmp_path / "out")
    assert r.returncode == 0, r.stderr
    assert header(tmp_path / "out" / "profile.csv") == ["x", "sigma_n", "sigma_star", "penetration"]
    assert header(tmp_path / "out" / "history.csv")[0] == "k"


def test_sweeps_write_fixed_headers(tmp_path):
    cfg = small_groove(tmp_path)
    out = tmp_path / "out"
    assert run("sweep-gamma", cfg, "--out", out).returncode == 0
    assert header(out / "gamma_sweep.csv") == ["scheme", "gamma", "iterations", "converged"]
    assert header(out / "gamma_optima.csv") == ["scheme", "gamma_opt", "iterations"]
    assert run("sweep-penalty", cfg, "--out", out).returncode == 0
    assert header(out / "penalty_sweep.csv") == [
        "c", "density", "max_penetration", "l2_distance", "oscillation", "iterations",
        "converged", "l2_distance_iterate",
    ]
    assert run("compare-schemes", cfg, "--out", out).returncode == 0
    assert header(out / "compare_schemes.csv") == ["scheme", "gamma", "eps_u", "iterations", "converged"]
    assert header(out / "compare_summary.csv") == ["scheme", "gamma", "slope", "r_squared"]
    assert run("oracle", cfg, "--out", out).returncode == 0
    assert header(out / "oracle_profile.csv") == ["x", "sigma_n", "sigma_star", "penetration"]


def test_config_errors_exit_2(tmp_path):
    bad = tmp_path / "bad.ini"
    bad.write_text("[mesh]\ndensity = 2\n")
    assert run("solve", bad).returncode == 2
    assert run("solve", tmp_path / "missing.ini").returncode == 2
    assert run("solve", small_groove(tmp_path), "--max-iter", "0").returncode == 2
    assert run("no-such-command").returncode == 2


def test_nonconvergence_exits_3(tmp_path):
    assert run("solve", small_groove(tmp_path), "--max-iter", "1", "--out", tmp_path / "o").returncode == 3
    div = tmp_path / "hertz.ini"
    div.write_text("[mesh]\ndensity = 4\n[scheme]\npolicy = none\ngamma = 1.9\nmax_iter = 500\n")
    r = run("solve", div, "--out", tmp_path / "d")
    assert r.returncode == 3, r.stderr
    assert "diverged" in r.stderr


def test_singular_subdomain_exits_4(tmp_path):
    # without a Robin term the groove's upper body is held by nothing vertically
    cfg = small_groove(tmp_path, "[scheme]\npolicy = none\n")
    r = run("solve", cfg, "--out", tmp_path / "s")
    assert r.returncode == 4
    assert "positive definite" in r.stderr


def test_shipped_hertz_config_solves(tmp_path):
    r = run("solve", CONFIGS / "hertz.ini", "--out", tmp_path)
    assert r.returncode == 0, r.stderr
    assert "converged" in r.stdout
