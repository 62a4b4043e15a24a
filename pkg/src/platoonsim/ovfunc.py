"""Piecewise-cosine optimal velocity function and the induced fundamental diagram."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["OVParams", "ov", "ov_prime", "fundamental_diagram"]


@dataclass(frozen=True)
class OVParams:
    """Shape parameters of the optimal velocity function.

    h_s : standstill headway (m); at or below it the target speed is 0.
    h_f : free-flow headway (m); at or above it the target speed saturates.
    v_f : free-flow speed (m/s).
    """

    h_s: float = 7.0
    h_f: float = 37.0
    v_f: float = 20.0

    def __post_init__(self):
        if not 0.0 < self.h_s < self.h_f:
            raise ValueError(f"need 0 < h_s < h_f, got h_s={self.h_s}, h_f={self.h_f}")
        if self.v_f <= 0.0:
            raise ValueError(f"free-flow speed must be positive, got v_f={self.v_f}")


def ov(params: OVParams, h):
    """Target speed (m/s) for headway ``h`` (scalar or array, meters).

    Zero up to ``h_s``, a half-cosine ramp on [h_s, h_f], and ``v_f`` beyond.
    Continuous and monotone non-decreasing; the ramp is evaluated on the closed
    interval so both breakpoints agree with the flat branches.
    """
    h = np.asarray(h, dtype=float)
    s = np.clip((h - params.h_s) / (params.h_f - params.h_s), 0.0, 1.0)
    out = 0.5 * params.v_f * (1.0 - np.cos(np.pi * s))
    return float(out) if out.ndim == 0 else out


def ov_prime(params: OVParams, h):
    """Analytic derivative of :func:`ov` with respect to headway (1/s).

    Exactly zero outside the open interval (h_s, h_f), including at both
    breakpoints where the cosine ramp has zero slope.
    """
    h = np.asarray(h, dtype=float)
    span = params.h_f - params.h_s
    s = (h - params.h_s) / span
    inside = (s > 0.0) & (s < 1.0)
    slope = 0.5 * params.v_f * np.pi / span * np.sin(np.pi * np.where(inside, s, 0.0))
    out = np.where(inside, slope, 0.0)
    return float(out) if out.ndim == 0 else out


def fundamental_diagram(params: OVParams, densities) -> np.ndarray:
    """Steady-state flow at each density: q(k) = k * ov(1/k).

    ``densities`` are in vehicles/m and must be strictly positive.  Returns an
    array of (density, flow) pairs suitable for plotting.
    """
    k = np.atleast_1d(np.asarray(densities, dtype=float))
    if np.any(k <= 0.0) or not np.all(np.isfinite(k)):
        raise ValueError("densities must be finite and strictly positive")
    q = k * ov(params, 1.0 / k)
    return np.column_stack([k, np.atleast_1d(q)])
