"""The full file pipeline: simulate on one side, plot on the other.

The simulator CLI writes CSV/YAML bundles; the plotting CLI reads only
those files.  This script drives both through subprocesses, exactly as a
shell user would, and leaves the figures in ./demo_output.
"""

import subprocess
import sys
from pathlib import Path

OUT = Path("demo_output")
OUT.mkdir(exist_ok=True)

CONFIG = OUT / "ring.yaml"
CONFIG.write_text(
    """\
ring: {length_m: 528.0, n_vehicles: 24}
platoons: {mode: uniform, size: 6, count: 4, connectivity: none}
sim: {dt: 0.1, horizon_s: 400.0, record_every: 5}
seed: 1
perturbation_m: 2.5
"""
)


def call(module, *args):
    cmd = [sys.executable, "-m", module, *args]
    print("$", " ".join(cmd[2:]))
    subprocess.run(cmd, check=True)


call("platoonsim", "simulate", "--config", str(CONFIG), "--out", str(OUT), "--prefix", "demo")
call("platoonsim", "stability", "--model", "none", "--sizes", "2,3,4,5,6",
     "--out", str(OUT / "lines.csv"))
call("platoonsim", "ovcurve", "--out", str(OUT / "ovcurve.csv"))

call("platoonplots", "headways", "--input", str(OUT / "demo_trajectory.csv"),
     "--out", str(OUT / "headways.svg"))
call("platoonplots", "envelope", "--input", str(OUT / "demo_trajectory.csv"),
     "--out", str(OUT / "envelope.svg"))
call("platoonplots", "neutral-lines", "--input", str(OUT / "lines.csv"),
     "--out", str(OUT / "neutral_lines.svg"))
call("platoonplots", "ov-function", "--input", str(OUT / "ovcurve.csv"),
     "--out", str(OUT / "ov_function.svg"))

print()
print(f"figures written under {OUT}/")
