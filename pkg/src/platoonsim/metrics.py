"""Post-processing of recorded trajectories: headway series, speed envelopes,
stabilization detection, and run summaries."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .sim import CollisionEvent, Trajectory

__all__ = [
    "RunSummary",
    "headways_over_time",
    "headway_series",
    "speed_envelope",
    "stabilization_time",
    "max_headway_dev",
    "ring_conservation_error",
    "summarize",
]


def headways_over_time(traj: Trajectory) -> np.ndarray:
    """(n_rec, n) front headways at every recorded step; column i is vehicle i."""
    L = traj.config.ring.length_m
    hw = np.roll(traj.pos, -1, axis=1) - traj.pos
    hw[:, -1] += L
    return hw


def headway_series(
    traj: Trajectory,
    stride: int = 6,
    window: Optional[Tuple[float, float]] = None,
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Headway time series for every ``stride``-th vehicle, starting at the first.

    Returns (times, vehicle_indices, headways) with headways shaped
    (len(times), len(vehicle_indices)).  ``window`` optionally restricts to
    recorded times t with window[0] <= t <= window[1] and must overlap the
    recorded range.
    """
    if int(stride) != stride or stride < 1:
        raise ValueError(f"stride must be an integer >= 1, got {stride}")
    sel = np.arange(0, traj.n_vehicles, stride)
    if len(sel) == 0:
        raise ValueError("vehicle selection is empty")
    hw = headways_over_time(traj)[:, sel]
    times = traj.times
    if window is not None:
        lo, hi = window
        if lo > hi:
            raise ValueError(f"window must be ordered, got {window}")
        mask = (times >= lo) & (times <= hi)
        if not np.any(mask):
            raise ValueError(f"window {window} lies outside the recorded range")
        times = times[mask]
        hw = hw[mask]
    return times, sel, hw


def speed_envelope(traj: Trajectory) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(times, min speed, max speed) across vehicles at every recorded step."""
    return traj.times, traj.vel.min(axis=1), traj.vel.max(axis=1)


def stabilization_time(
    traj: Trajectory,
    epsilon: float = 0.5,
    hold: float = 50.0,
    h_eq: Optional[float] = None,
) -> Optional[float]:
    """Earliest recorded t whose whole window [t, t + hold] keeps every headway
    within ``epsilon`` of equilibrium; None when no such window fits.

    The verdict requires the full hold window inside the recorded range, so a
    quiet stretch shorter than ``hold`` at the very end does not count.
    """
    if epsilon <= 0.0 or hold < 0.0:
        raise ValueError(f"need epsilon > 0 and hold >= 0, got {epsilon}, {hold}")
    if h_eq is None:
        h_eq = traj.config.ring.headway_eq
    dev = np.abs(headways_over_time(traj) - h_eq).max(axis=1)
    ok = dev < epsilon
    times = traj.times
    if len(times) < 2:
        return float(times[0]) if len(times) == 1 and ok[0] and hold == 0.0 else None
    dt_rec = times[1] - times[0]
    w = int(np.floor(hold / dt_rec + 1e-9)) + 1  # samples covering [t, t+hold]
    if w > len(times):
        return None
    csum = np.concatenate([[0], np.cumsum(ok.astype(int))])
    full = np.flatnonzero(csum[w:] - csum[:-w] == w)
    return float(times[full[0]]) if len(full) else None


def max_headway_dev(
    traj: Trajectory,
    window: Optional[Tuple[float, float]] = None,
    h_eq: Optional[float] = None,
) -> float:
    """Largest |headway - h_eq| over all vehicles and recorded times in ``window``."""
    if h_eq is None:
        h_eq = traj.config.ring.headway_eq
    dev = np.abs(headways_over_time(traj) - h_eq)
    if window is None:
        return float(dev.max())
    lo, hi = window
    mask = (traj.times >= lo) & (traj.times <= hi)
    if not np.any(mask):
        raise ValueError(f"window {window} lies outside the recorded range")
    return float(dev[mask].max())


def ring_conservation_error(traj: Trajectory) -> float:
    """Largest |sum of headways - L| over all recorded steps."""
    L = traj.config.ring.length_m
    return float(np.abs(headways_over_time(traj).sum(axis=1) - L).max())


@dataclass(frozen=True)
class RunSummary:
    """Stabilization verdict and headline statistics of one run.

    ``stabilized`` requires both a detected hold window and that deviations in
    the final window stayed below the detector epsilon, so a transient dip
    that later regrows does not count as stabilized.
    """

    stabilized: bool
    stabilization_time_s: Optional[float]
    final_max_headway_dev_m: float
    min_speed_mps: float
    max_speed_mps: float
    detector_epsilon_m: float
    detector_hold_s: float
    final_window_s: float
    collision: Optional[CollisionEvent]


def summarize(
    traj: Trajectory,
    epsilon: float = 0.5,
    hold: float = 50.0,
    final_window: float = 200.0,
) -> RunSummary:
    """Reduce a trajectory to its RunSummary with the given detector settings."""
    t_stab = stabilization_time(traj, epsilon=epsilon, hold=hold)
    t_end = float(traj.times[-1]) if len(traj.times) else 0.0
    final_dev = max_headway_dev(traj, window=(max(0.0, t_end - final_window), t_end))
    _, vmin, vmax = speed_envelope(traj)
    return RunSummary(
        stabilized=t_stab is not None and final_dev < epsilon,
        stabilization_time_s=t_stab,
        final_max_headway_dev_m=final_dev,
        min_speed_mps=float(vmin.min()),
        max_speed_mps=float(vmax.max()),
        detector_epsilon_m=epsilon,
        detector_hold_s=hold,
        final_window_s=final_window,
        collision=traj.collision,
    )
