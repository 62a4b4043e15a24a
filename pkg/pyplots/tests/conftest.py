"""Shared inputs for the figure tests.

Everything under the ``tables`` fixture is produced by invoking the
simulator's command line in a subprocess, so these tests exercise exactly
the file formats a user would hand to the plotting scripts.
"""

from pathlib import Path

import pytest

from plot_helpers import run_sim


def _write_config(path: Path, *, ring, platoons, horizon_s, record_every, perturbation_m):
    length_m, n_vehicles = ring
    lines = [
        f"ring: {{length_m: {length_m}, n_vehicles: {n_vehicles}}}",
        "platoons:",
    ]
    for key, value in platoons.items():
        lines.append(f"  {key}: {value}")
    lines += [
        f"sim: {{dt: 0.1, horizon_s: {horizon_s}, record_every: {record_every}}}",
        "seed: 1",
        f"perturbation_m: {perturbation_m}",
    ]
    path.write_text("\n".join(lines) + "\n")


@pytest.fixture(scope="session")
def tables(tmp_path_factory):
    """Bundles and tables for every figure kind, generated once per session."""
    root = tmp_path_factory.mktemp("tables")

    eq_cfg = root / "eq.yaml"
    _write_config(
        eq_cfg,
        ring=(264.0, 12),
        platoons={"mode": "uniform", "size": 6, "count": 2, "connectivity": "none"},
        horizon_s=20.0,
        record_every=5,
        perturbation_m=0.0,
    )
    run_sim("simulate", "--config", str(eq_cfg), "--out", str(root), "--prefix", "eq")

    # the two headline bundles match the full-scale seeded runs of the
    # simulator's own acceptance suite
    stable_cfg = root / "stable.yaml"
    _write_config(
        stable_cfg,
        ring=(2640.0, 120),
        platoons={"mode": "uniform", "size": 6, "count": 20, "connectivity": "none"},
        horizon_s=400.0,
        record_every=10,
        perturbation_m=2.5,
    )
    run_sim("simulate", "--config", str(stable_cfg), "--out", str(root), "--prefix", "stable")

    unstable_cfg = root / "unstable.yaml"
    _write_config(
        unstable_cfg,
        ring=(2640.0, 120),
        platoons={"mode": "uniform", "size": 2, "count": 60, "connectivity": "none"},
        horizon_s=4000.0,
        record_every=10,
        perturbation_m=2.5,
    )
    run_sim(
        "simulate", "--config", str(unstable_cfg), "--out", str(root), "--prefix", "unstable"
    )

    sweep_cfg = root / "sweep.yaml"
    _write_config(
        sweep_cfg,
        ring=(264.0, 12),
        platoons={"mode": "uniform", "size": 4, "count": 3, "connectivity": "two_way"},
        horizon_s=2000.0,
        record_every=10,
        perturbation_m=2.5,
    )
    sweep_dir = root / "sweep"
    run_sim(
        "sweep", "--config", str(sweep_cfg), "--axis", "control.t_d",
        "--values", "0.4,0.8,1.2,1.6", "--out", str(sweep_dir),
    )

    run_sim(
        "stability", "--model", "none", "--sizes", "2,3,4,5,6",
        "--out", str(root / "thm_lines.csv"),
    )
    run_sim(
        "stability", "--model", "two_way", "--sizes", "4", "--td", "2.0",
        "--out", str(root / "delay_gap.csv"),
    )
    run_sim("ovcurve", "--out", str(root / "ovcurve.csv"))

    return {
        "root": root,
        "eq": root / "eq_trajectory.csv",
        "stable": root / "stable_trajectory.csv",
        "unstable": root / "unstable_trajectory.csv",
        "sweep_dir": sweep_dir,
        "sweep_points": [
            sweep_dir / f"control_t_d_{i}_trajectory.csv" for i in range(4)
        ],
        "thm_lines": root / "thm_lines.csv",
        "delay_gap": root / "delay_gap.csv",
        "ovcurve": root / "ovcurve.csv",
    }
