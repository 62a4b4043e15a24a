"""Readers for the simulator's output tables.

Column layouts below mirror the simulator CLI's documented file formats;
this package talks to the simulator only through those files.  Every reader
validates the header before touching the data and names the offending
column in its error message.
"""

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import yaml


class SchemaError(ValueError):
    """An input table does not match the documented format."""


TRAJECTORY_COLUMNS = (
    "time_s",
    "platoon_id",
    "index_in_platoon",
    "global_index",
    "position_m",
    "speed_mps",
    "accel_mps2",
    "headway_m",
)

STABILITY_COLUMNS = ("model", "size", "p", "t_d", "h_m", "a_star")

OVCURVE_COLUMNS = ("headway_m", "speed_mps", "density_veh_per_m", "flow_veh_per_s")

# columns holding labels rather than numbers
_TEXT_COLUMNS = {"model", "sizes"}


def read_table(path, expected: Sequence[str]) -> Dict[str, np.ndarray]:
    """Parse one CSV table into per-column arrays, validating its header.

    Numeric cells accept ``inf``/``-inf``; label columns come back as object
    arrays.  A header mismatch or an unparseable cell raises ``SchemaError``
    naming the column.
    """
    path = Path(path)
    with open(path, newline="") as f:
        reader = csv.reader(f)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError(f"{path}: empty file, expected header {list(expected)}")
        missing = [c for c in expected if c not in header]
        extra = [c for c in header if c not in expected]
        if missing or extra:
            raise SchemaError(
                f"{path}: header mismatch, missing column(s) {missing}, "
                f"unexpected column(s) {extra}"
            )
        rows = [r for r in reader if r]
    if not rows:
        raise SchemaError(f"{path}: no data rows")
    pos = {c: header.index(c) for c in expected}
    out: Dict[str, np.ndarray] = {}
    for col in expected:
        cells = [r[pos[col]] for r in rows]
        if col in _TEXT_COLUMNS:
            out[col] = np.array(cells, dtype=object)
            continue
        try:
            out[col] = np.array([float(c) for c in cells])
        except ValueError as exc:
            raise SchemaError(f"{path}: column {col!r} is not numeric: {exc}") from None
    return out


@dataclass(frozen=True)
class TrajectoryTable:
    """Long-format trajectory rows pivoted to (time, vehicle) grids."""

    times: np.ndarray  # (n_times,)
    headway: np.ndarray  # (n_times, n_vehicles)
    speed: np.ndarray
    position: np.ndarray
    platoon_id: np.ndarray  # (n_vehicles,)
    index_in_platoon: np.ndarray

    @property
    def n_vehicles(self) -> int:
        return self.headway.shape[1]


def read_trajectory(path) -> TrajectoryTable:
    cols = read_table(path, TRAJECTORY_COLUMNS)
    gi = cols["global_index"].astype(int)
    times = np.unique(cols["time_s"])
    n = gi.max() + 1
    if len(cols["time_s"]) != len(times) * n:
        raise SchemaError(
            f"{path}: expected {len(times)} times x {n} vehicles "
            f"= {len(times) * n} rows, found {len(cols['time_s'])}"
        )
    t_idx = np.searchsorted(times, cols["time_s"])
    order = np.lexsort((gi, t_idx))
    expect_gi = np.tile(np.arange(n), len(times))
    if not np.array_equal(gi[order], expect_gi):
        raise SchemaError(f"{path}: column 'global_index' does not tile the time grid")

    def grid(col: str) -> np.ndarray:
        return cols[col][order].reshape(len(times), n)

    return TrajectoryTable(
        times=times,
        headway=grid("headway_m"),
        speed=grid("speed_mps"),
        position=grid("position_m"),
        platoon_id=grid("platoon_id")[0].astype(int),
        index_in_platoon=grid("index_in_platoon")[0].astype(int),
    )


def read_stability(path) -> Dict[str, np.ndarray]:
    return read_table(path, STABILITY_COLUMNS)


def read_ovcurve(path) -> Dict[str, np.ndarray]:
    return read_table(path, OVCURVE_COLUMNS)


def stability_groups(
    cols: Dict[str, np.ndarray],
) -> List[Tuple[Tuple[str, int, float], np.ndarray, np.ndarray]]:
    """Split a stability table into its (model, size, t_d) curves.

    Groups keep first-appearance order; each yields (key, h, a_star) with
    rows in file order.
    """
    keys = list(zip(cols["model"], cols["size"].astype(int), cols["t_d"]))
    seen: Dict[tuple, int] = {}
    groups = []
    for i, key in enumerate(keys):
        if key not in seen:
            seen[key] = len(groups)
            groups.append((key, [], []))
        _, hs, astars = groups[seen[key]]
        hs.append(cols["h_m"][i])
        astars.append(cols["a_star"][i])
    return [
        ((str(m), int(n), float(td)), np.array(hs), np.array(astars))
        for (m, n, td), hs, astars in groups
    ]


def summary_path_for(trajectory_path) -> Optional[Path]:
    """Locate the sibling summary of a trajectory file, if the bundle has one."""
    p = Path(trajectory_path)
    if p.name.endswith("_trajectory.csv"):
        candidate = p.with_name(p.name[: -len("_trajectory.csv")] + "_summary.yaml")
        if candidate.exists():
            return candidate
    return None


def provenance_line(trajectory_path, summary_path=None) -> str:
    """Footnote text for a figure: bundle provenance when available."""
    p = Path(trajectory_path)
    spath = Path(summary_path) if summary_path else summary_path_for(p)
    if spath is None:
        return f"source: {p.name}"
    with open(spath) as f:
        doc = yaml.safe_load(f)
    prov = (doc or {}).get("provenance", {})
    version = prov.get("version", "?")
    seed = prov.get("seed", "?")
    return f"source: {p.name} | platoonsim {version} | seed {seed}"
