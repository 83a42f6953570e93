import subprocess
import sys

import pytest


def run_cli(*args):
    proc = subprocess.run(
        [sys.executable, "-m", "codeball.cli", *map(str, args)],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0, proc.stderr
    return proc


@pytest.fixture(scope="session")
def experiment_outputs(tmp_path_factory):
    """Small but real runs of the experiment CLI (n = 1000 so the caption
    windows apply verbatim); session-scoped because the chains take a
    couple of seconds each."""
    root = tmp_path_factory.mktemp("runs")
    good = root / "good"
    bad = root / "bad"
    run_cli("spectrum", "--n", 1000, "--k", 100, "--b", 20,
            "--steps", 1_000_000, "--trials", 2, "--seed", 3, "--out", good)
    run_cli("spectrum", "--n", 1000, "--k", 300, "--b", 60,
            "--steps", 1_000_000, "--trials", 1, "--seed", 4, "--out", bad)
    run_cli("region-map", "--n", 1000, "--k-grid", 50, 450, 100,
            "--b-grid", 10, 100, 30, "--out", root / "region")
    run_cli("fidelity-sweep", "--n", 1000, "--b-list", "10,20",
            "--trials", 1, "--steps", 200_000, "--seed", 5,
            "--out", root / "sweep")
    run_cli("runtime-compare", "--n", 1000, "--k", 100, "--b", 20,
            "--steps", 400_000, "--trials", 1, "--seed", 6,
            "--max-delta", 12, "--out", root / "runtime")
    return {
        "good": good,
        "bad": bad,
        "region_map": root / "region" / "region_map.csv",
        "sweep": root / "sweep" / "fidelity_sweep.csv",
        "runtime": root / "runtime" / "runtime_compare.csv",
    }
