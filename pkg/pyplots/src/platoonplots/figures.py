"""Figure builders over the parsed tables.

All figures are rendered through one style context with a fixed SVG hash
salt and no embedded timestamps, so identical inputs produce identical
bytes.  Data curves carry ``gid`` markers that survive into the SVG and
make the figures checkable structurally.
"""

from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Tuple

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .io import (  # noqa: E402
    SchemaError,
    provenance_line,
    read_ovcurve,
    read_stability,
    read_trajectory,
    stability_groups,
)

_STYLE = {
    "svg.hashsalt": "platoonplots",
    "figure.figsize": (8.0, 5.0),
    "figure.dpi": 100,
    "savefig.dpi": 150,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "font.size": 10,
}

FIGURE_KINDS = ("headways", "envelope", "neutral_lines", "ov_function")


@dataclass(frozen=True)
class FigureSpec:
    """One figure request: what to draw, from which table, to which file."""

    kind: str
    input_path: Path
    output_path: Path
    window: Optional[Tuple[float, float]] = None
    stride: int = 6
    summary_path: Optional[Path] = None
    raster: bool = False

    def __post_init__(self):
        if self.kind not in FIGURE_KINDS:
            raise ValueError(f"unknown figure kind {self.kind!r}")
        if self.stride < 1:
            raise ValueError(f"stride must be >= 1, got {self.stride}")
        if self.window is not None and not self.window[0] < self.window[1]:
            raise ValueError(f"window must satisfy lo < hi, got {self.window}")


def _save(fig, out, raster: bool) -> Path:
    out = Path(out)
    out.parent.mkdir(parents=True, exist_ok=True)
    if raster:
        fig.savefig(out, format="png")
    else:
        fig.savefig(out, format="svg", metadata={"Date": None})
    plt.close(fig)
    return out


def _footnote(fig, caption: str) -> None:
    if caption:
        txt = fig.text(0.005, 0.005, caption, fontsize=6, family="monospace")
        txt.set_gid("provenance")


def plot_headways(
    input_path,
    output_path,
    *,
    stride: int = 6,
    window: Optional[Tuple[float, float]] = None,
    summary_path=None,
    raster: bool = False,
) -> Path:
    """Headway vs. time for every ``stride``-th vehicle over the window."""
    table = read_trajectory(input_path)
    times = table.times
    if window is not None:
        lo, hi = window
        mask = (times >= lo) & (times <= hi)
        if not mask.any():
            raise SchemaError(
                f"{input_path}: window [{lo}, {hi}] selects no recorded samples "
                f"(table covers [{times[0]}, {times[-1]}])"
            )
    else:
        mask = np.ones(len(times), dtype=bool)
    sel = np.arange(0, table.n_vehicles, stride)

    with plt.rc_context(_STYLE):
        fig, ax = plt.subplots()
        for idx in sel:
            (line,) = ax.plot(times[mask], table.headway[mask, idx], linewidth=0.9)
            line.set_gid(f"headway-{idx}")
        ax.set_xlabel("time (s)")
        ax.set_ylabel("headway (m)")
        ax.set_title(f"headways of every {stride}th vehicle")
        _footnote(fig, provenance_line(input_path, summary_path))
        return _save(fig, output_path, raster)


def plot_envelope(
    input_path, output_path, *, summary_path=None, raster: bool = False
) -> Path:
    """Fleet-wide minimum and maximum speed vs. time."""
    table = read_trajectory(input_path)
    vmin = table.speed.min(axis=1)
    vmax = table.speed.max(axis=1)

    with plt.rc_context(_STYLE):
        fig, ax = plt.subplots()
        (lo,) = ax.plot(table.times, vmin, label="min speed")
        lo.set_gid("envelope-min")
        (hi,) = ax.plot(table.times, vmax, label="max speed")
        hi.set_gid("envelope-max")
        ax.set_xlabel("time (s)")
        ax.set_ylabel("speed (m/s)")
        ax.set_title("speed envelope")
        ax.legend(loc="best")
        _footnote(fig, provenance_line(input_path, summary_path))
        return _save(fig, output_path, raster)


def plot_neutral_lines(input_path, output_path, *, raster: bool = False) -> Path:
    """Critical sensitivity a*(h), one curve per (model, size, delay) group.

    Headway bands that are unstable for every sensitivity are tabulated as
    ``inf`` and rendered as gaps in the curve.
    """
    cols = read_stability(input_path)
    groups = stability_groups(cols)

    with plt.rc_context(_STYLE):
        fig, ax = plt.subplots()
        for (model, size, t_d), h, a_star in groups:
            y = np.where(np.isinf(a_star), np.nan, a_star)
            label = f"{model} N={size}" + (f" t_d={t_d:g}s" if t_d else "")
            (line,) = ax.plot(h, y, label=label)
            line.set_gid(f"neutral-{model}-N{size}-td{t_d:g}")
        ax.set_xlabel("equilibrium headway (m)")
        ax.set_ylabel("critical sensitivity a* (1/s)")
        ax.set_title("neutral stability lines")
        ax.legend(loc="best", fontsize=8)
        _footnote(fig, f"source: {Path(input_path).name}")
        return _save(fig, output_path, raster)


def plot_ov_function(input_path, output_path, *, raster: bool = False) -> Path:
    """Optimal-velocity curve beside its fundamental diagram."""
    cols = read_ovcurve(input_path)

    with plt.rc_context(_STYLE):
        fig, (ax_v, ax_q) = plt.subplots(1, 2, figsize=(10.0, 4.5))
        (ov,) = ax_v.plot(cols["headway_m"], cols["speed_mps"])
        ov.set_gid("ov-curve")
        ax_v.set_xlabel("headway (m)")
        ax_v.set_ylabel("speed (m/s)")
        ax_v.set_title("optimal velocity")
        (fd,) = ax_q.plot(cols["density_veh_per_m"], cols["flow_veh_per_s"])
        fd.set_gid("fd-curve")
        ax_q.set_xlabel("density (veh/m)")
        ax_q.set_ylabel("flow (veh/s)")
        ax_q.set_title("fundamental diagram")
        _footnote(fig, f"source: {Path(input_path).name}")
        return _save(fig, output_path, raster)


def render(spec: FigureSpec) -> Path:
    """Dispatch one figure request."""
    if spec.kind == "headways":
        return plot_headways(
            spec.input_path,
            spec.output_path,
            stride=spec.stride,
            window=spec.window,
            summary_path=spec.summary_path,
            raster=spec.raster,
        )
    if spec.kind == "envelope":
        return plot_envelope(
            spec.input_path,
            spec.output_path,
            summary_path=spec.summary_path,
            raster=spec.raster,
        )
    if spec.kind == "neutral_lines":
        return plot_neutral_lines(spec.input_path, spec.output_path, raster=spec.raster)
    return plot_ov_function(spec.input_path, spec.output_path, raster=spec.raster)
