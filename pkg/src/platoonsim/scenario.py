"""Scenario assembly: platoon layouts, defaults, and seeded initial conditions.

Ring order runs in the driving direction: within a platoon, index 1 is the
tail and index ``size`` is the head; platoon i+1 travels directly ahead of
platoon i; the last platoon follows the first across the wrap.  The
equilibrium position of the vehicle with 1-based global index g is g * h with
h = L / n, and every vehicle then moves at ov(h).
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import List, Optional, Tuple

import numpy as np

from .models import ControlParams, ModelKind, SafetyParams
from .ovfunc import OVParams, ov
from .sim import RingRoad, SimConfig

__all__ = [
    "PlatoonSpec",
    "ScenarioConfig",
    "ConfigError",
    "CONNECTIVITY_KINDS",
    "build_uniform",
    "build_segregated",
    "build_evenly_mixed",
    "equilibrium_state",
    "init_conditions",
]


class ConfigError(ValueError):
    """A scenario configuration that violates its own contracts."""


CONNECTIVITY_KINDS = {
    "none": ModelKind.LEADER_NO_CONNECTION,
    "front": ModelKind.LEADER_FRONT_CONNECTED,
    "two_way": ModelKind.LEADER_TWO_WAY_CONNECTED,
}


@dataclass(frozen=True)
class PlatoonSpec:
    """One platoon: its size and the model kind its head vehicle runs.

    A size-1 platoon has no followers and its sole vehicle runs the HDV law.
    """

    size: int
    kind: ModelKind = ModelKind.LEADER_NO_CONNECTION

    def __post_init__(self):
        if int(self.size) != self.size or self.size < 1:
            raise ConfigError(f"platoon size must be an integer >= 1, got {self.size}")
        if self.size == 1 and self.kind != ModelKind.HDV_OVM:
            object.__setattr__(self, "kind", ModelKind.HDV_OVM)
        if self.size > 1 and self.kind not in (
            ModelKind.LEADER_NO_CONNECTION,
            ModelKind.LEADER_FRONT_CONNECTED,
            ModelKind.LEADER_TWO_WAY_CONNECTED,
        ):
            raise ConfigError(f"platoon of size {self.size} needs a leader kind, got {self.kind}")


@dataclass(frozen=True)
class ScenarioConfig:
    """Everything a run needs; seeds are explicit and mandatory."""

    ring: RingRoad
    platoons: Tuple[PlatoonSpec, ...]
    control: ControlParams
    safety: SafetyParams
    ov: OVParams
    sim: SimConfig
    seed: int
    perturbation: float = 2.5

    def validate(self) -> None:
        total = sum(sp.size for sp in self.platoons)
        if total != self.ring.n_vehicles:
            raise ConfigError(
                f"platoon sizes sum to {total}, ring carries {self.ring.n_vehicles} vehicles"
            )
        if self.ring.headway_eq <= self.safety.l:
            raise ConfigError(
                f"equilibrium headway {self.ring.headway_eq:.3f} m does not exceed "
                f"the vehicle length {self.safety.l} m"
            )
        if self.perturbation < 0.0:
            raise ConfigError(f"perturbation must be >= 0, got {self.perturbation}")
        if self.seed is None or int(self.seed) != self.seed or self.seed < 0:
            raise ConfigError(f"seed must be a non-negative integer, got {self.seed!r}")
        ratio = self.control.t_d / self.sim.dt
        if abs(ratio - round(ratio)) > 1e-9 * max(1.0, abs(ratio)):
            raise ConfigError(
                f"delay t_d={self.control.t_d} is not an integer multiple of dt={self.sim.dt}"
            )

    @property
    def headway_eq(self) -> float:
        return self.ring.headway_eq

    @property
    def sizes(self) -> List[int]:
        return [sp.size for sp in self.platoons]


_DEFAULT_RING = RingRoad(length_m=2640.0, n_vehicles=120)
_DEFAULT_OV = OVParams(h_s=7.0, h_f=37.0, v_f=20.0)
_DEFAULT_SAFETY = SafetyParams(a_m=3.0, a_b=-8.0, tau=4.0, l=5.0)
_DEFAULT_SIM = SimConfig(dt=0.1, horizon=4000.0, record_every=1)


def _assemble(platoons, seed, *, a, p, t_d, ring, ovp, safety, dt, horizon, record_every, perturbation):
    config = ScenarioConfig(
        ring=ring,
        platoons=tuple(platoons),
        control=ControlParams(a=a, p=p, t_d=t_d),
        safety=safety,
        ov=ovp,
        sim=SimConfig(dt=dt, horizon=horizon, record_every=record_every),
        seed=seed,
        perturbation=perturbation,
    )
    config.validate()
    return config


def build_uniform(
    n_platoons: int,
    size: int,
    connectivity: str = "none",
    seed: int = 0,
    *,
    a: float = 0.6,
    p: float = 0.3,
    t_d: float = 0.0,
    ring: RingRoad = _DEFAULT_RING,
    ovp: OVParams = _DEFAULT_OV,
    safety: SafetyParams = _DEFAULT_SAFETY,
    dt: float = 0.1,
    horizon: float = 4000.0,
    record_every: int = 1,
    perturbation: float = 2.5,
) -> ScenarioConfig:
    """``n_platoons`` identical platoons of ``size`` vehicles covering the ring.

    Size 1 degenerates to a pure HDV ring regardless of connectivity.
    """
    if connectivity not in CONNECTIVITY_KINDS:
        raise ConfigError(f"unknown connectivity {connectivity!r}")
    if n_platoons * size != ring.n_vehicles:
        raise ConfigError(
            f"{n_platoons} platoons of {size} make {n_platoons * size} vehicles, "
            f"ring carries {ring.n_vehicles}"
        )
    kind = ModelKind.HDV_OVM if size == 1 else CONNECTIVITY_KINDS[connectivity]
    platoons = [PlatoonSpec(size=size, kind=kind) for _ in range(n_platoons)]
    return _assemble(
        platoons, seed, a=a, p=p, t_d=t_d, ring=ring, ovp=ovp, safety=safety,
        dt=dt, horizon=horizon, record_every=record_every, perturbation=perturbation,
    )


def build_segregated(
    size: int,
    n_platoons: int,
    n_hdvs: int,
    connectivity: str = "none",
    seed: int = 0,
    **kwargs,
) -> ScenarioConfig:
    """A contiguous block of CAV platoons followed by a contiguous block of HDVs."""
    ring = kwargs.get("ring", _DEFAULT_RING)
    if size * n_platoons + n_hdvs != ring.n_vehicles:
        raise ConfigError(
            f"{n_platoons} platoons of {size} plus {n_hdvs} HDVs make "
            f"{size * n_platoons + n_hdvs} vehicles, ring carries {ring.n_vehicles}"
        )
    if connectivity not in CONNECTIVITY_KINDS:
        raise ConfigError(f"unknown connectivity {connectivity!r}")
    kind = CONNECTIVITY_KINDS[connectivity]
    platoons = [PlatoonSpec(size=size, kind=kind) for _ in range(n_platoons)]
    platoons += [PlatoonSpec(size=1, kind=ModelKind.HDV_OVM) for _ in range(n_hdvs)]
    defaults = dict(
        a=0.6, p=0.3, t_d=0.0, ring=_DEFAULT_RING, ovp=_DEFAULT_OV, safety=_DEFAULT_SAFETY,
        dt=0.1, horizon=4000.0, record_every=1, perturbation=2.5,
    )
    defaults.update(kwargs)
    return _assemble(platoons, seed, **defaults)


def build_evenly_mixed(
    size: int,
    hdv_followers: int,
    connectivity: str = "none",
    seed: int = 0,
    **kwargs,
) -> ScenarioConfig:
    """Repeating groups of one platoon of ``size`` CAVs plus ``hdv_followers`` HDVs.

    When the group pattern does not divide the ring, a remainder of at least
    ``size`` vehicles forms one more platoon with the leftover as its (possibly
    zero) followers; a smaller remainder joins the last group's followers, so
    one platoon may be followed by a different number of HDVs.
    """
    ring = kwargs.get("ring", _DEFAULT_RING)
    if hdv_followers < 0:
        raise ConfigError(f"hdv_followers must be >= 0, got {hdv_followers}")
    if connectivity not in CONNECTIVITY_KINDS:
        raise ConfigError(f"unknown connectivity {connectivity!r}")
    group = size + hdv_followers
    n = ring.n_vehicles
    m = n // group
    if m < 1:
        raise ConfigError(f"group of {group} vehicles does not fit a ring of {n}")
    remainder = n - m * group
    follower_counts = [hdv_followers] * m
    if remainder >= size:
        follower_counts.append(remainder - size)
    elif remainder > 0:
        follower_counts[-1] += remainder

    kind = CONNECTIVITY_KINDS[connectivity]
    platoons: List[PlatoonSpec] = []
    for f in follower_counts:
        platoons.append(PlatoonSpec(size=size, kind=kind))
        platoons += [PlatoonSpec(size=1, kind=ModelKind.HDV_OVM) for _ in range(f)]
    defaults = dict(
        a=0.6, p=0.3, t_d=0.0, ring=_DEFAULT_RING, ovp=_DEFAULT_OV, safety=_DEFAULT_SAFETY,
        dt=0.1, horizon=4000.0, record_every=1, perturbation=2.5,
    )
    defaults.update(kwargs)
    return _assemble(platoons, seed, **defaults)


def equilibrium_state(config: ScenarioConfig) -> Tuple[np.ndarray, np.ndarray]:
    """Unperturbed state: vehicle with 1-based index g at g * h, all at ov(h)."""
    n = config.ring.n_vehicles
    h = config.ring.headway_eq
    x = h * np.arange(1, n + 1, dtype=float)
    v = np.full(n, ov(config.ov, h))
    return x, v


_MAX_REDRAWS = 100


def init_conditions(config: ScenarioConfig) -> Tuple[np.ndarray, np.ndarray]:
    """Seeded perturbed start: independent uniform offsets on positions and speeds.

    Offsets are drawn on [-delta, +delta] around the equilibrium state.  A draw
    that breaks the ring ordering (including the wrap pair) is re-drawn pair by
    pair up to a bounded retry count, then rejected.
    """
    config.validate()
    n = config.ring.n_vehicles
    delta = config.perturbation
    x_eq, v_eq = equilibrium_state(config)
    rng = np.random.default_rng(config.seed)
    r_pos = rng.uniform(-delta, delta, n)
    r_vel = rng.uniform(-delta, delta, n)
    x = x_eq + r_pos
    v = v_eq + r_vel

    L = config.ring.length_m
    for _ in range(_MAX_REDRAWS):
        gaps = np.roll(x, -1) - x
        gaps[-1] += L
        bad = np.flatnonzero(gaps <= 0.0)
        if len(bad) == 0:
            return x, v
        for i in bad:
            x[i] = x_eq[i] + rng.uniform(-delta, delta)
            x[(i + 1) % n] = x_eq[(i + 1) % n] + rng.uniform(-delta, delta)
    raise ConfigError(
        f"could not draw an ordered initial state after {_MAX_REDRAWS} retries; "
        f"perturbation {delta} is too large for headway {config.ring.headway_eq}"
    )
