"""Fixed-step ring-road simulation engine for mixed platoon/HDV traffic.

Positions are unwrapped (monotone along the driving direction); only the
headway computation knows the ring length, by adding L for the wrap pair.
Integration is a modified Euler scheme: speeds advance with the applied
acceleration, positions advance with the midpoint of old and new speed, and
all vehicles update synchronously.  Speeds are allowed to go negative.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .models import (
    ControlParams,
    ModelKind,
    SafetyParams,
    accel_ovm,
    accel_platoon_follower,
    safety_overlay,
)
from .ovfunc import OVParams, ov

__all__ = [
    "RingRoad",
    "SimConfig",
    "Trajectory",
    "CollisionEvent",
    "CollisionError",
    "NumericsError",
    "headway",
    "ring_gaps",
    "run",
]


@dataclass(frozen=True)
class RingRoad:
    """Single-lane ring of length ``length_m`` carrying ``n_vehicles``."""

    length_m: float = 2640.0
    n_vehicles: int = 120

    def __post_init__(self):
        if self.length_m <= 0.0:
            raise ValueError(f"ring length must be positive, got {self.length_m}")
        if int(self.n_vehicles) != self.n_vehicles or self.n_vehicles < 2:
            raise ValueError(f"need an integer vehicle count >= 2, got {self.n_vehicles}")

    @property
    def headway_eq(self) -> float:
        """Equilibrium headway L / n (m)."""
        return self.length_m / self.n_vehicles


@dataclass(frozen=True)
class SimConfig:
    """Time step dt (s), horizon (s) and recording cadence in steps."""

    dt: float = 0.1
    horizon: float = 4000.0
    record_every: int = 1

    def __post_init__(self):
        if self.dt <= 0.0:
            raise ValueError(f"dt must be positive, got {self.dt}")
        if self.horizon < self.dt:
            raise ValueError(f"horizon must be at least one step, got {self.horizon}")
        if int(self.record_every) != self.record_every or self.record_every < 1:
            raise ValueError(f"record_every must be an integer >= 1, got {self.record_every}")


@dataclass(frozen=True)
class CollisionEvent:
    """A non-positive headway between ``behind`` and the vehicle ahead of it."""

    time_s: float
    behind: int
    ahead: int


class CollisionError(RuntimeError):
    """Raised when two adjacent vehicles collide; carries the partial trajectory."""

    def __init__(self, event: CollisionEvent, trajectory: "Trajectory"):
        super().__init__(
            f"collision at t={event.time_s:.3f} s between vehicle {event.behind} "
            f"and vehicle {event.ahead} ahead of it"
        )
        self.event = event
        self.trajectory = trajectory


class NumericsError(RuntimeError):
    """Raised when a vehicle's applied acceleration turns non-finite."""

    def __init__(self, vehicle: int, step: int, time_s: float):
        super().__init__(
            f"non-finite acceleration for vehicle {vehicle} at step {step} (t={time_s:.3f} s)"
        )
        self.vehicle = vehicle
        self.step = step


def headway(ring: RingRoad, x_behind: float, x_ahead: float, wrap: bool = False) -> float:
    """Gap from ``x_behind`` to ``x_ahead``; the wrap pair gains one ring length."""
    d = x_ahead - x_behind
    return d + ring.length_m if wrap else d


def ring_gaps(ring: RingRoad, x: np.ndarray) -> np.ndarray:
    """Front gap of every vehicle; entry i is the gap from i to i+1 (mod n)."""
    gaps = np.roll(x, -1) - x
    gaps[-1] += ring.length_m
    return gaps


@dataclass
class Trajectory:
    """Recorded run: per-vehicle time series plus static vehicle metadata."""

    times: np.ndarray
    pos: np.ndarray
    vel: np.ndarray
    acc: np.ndarray
    platoon_id: np.ndarray
    index_in_platoon: np.ndarray
    kinds: list
    config: object
    collision: Optional[CollisionEvent] = None

    @property
    def n_vehicles(self) -> int:
        return self.pos.shape[1]


class _VehicleTable:
    """Static per-vehicle bookkeeping derived from the platoon layout."""

    def __init__(self, platoons, ring: RingRoad, control: ControlParams):
        sizes = [sp.size for sp in platoons]
        if sum(sizes) != ring.n_vehicles:
            raise ValueError(
                f"platoon sizes sum to {sum(sizes)} but the ring carries {ring.n_vehicles}"
            )
        n = ring.n_vehicles
        m = len(sizes)
        self.sizes = np.asarray(sizes, dtype=int)
        self.platoon_id = np.empty(n, dtype=int)
        self.j_index = np.empty(n, dtype=int)  # 1 = tail ... size = head
        self.kinds = [None] * n
        self.heads_g = np.empty(m, dtype=int)

        off = 0
        for i, sp in enumerate(platoons):
            self.platoon_id[off : off + sp.size] = i
            self.j_index[off : off + sp.size] = np.arange(1, sp.size + 1)
            head = off + sp.size - 1
            self.heads_g[i] = head
            for g in range(off, head):
                self.kinds[g] = ModelKind.PLATOON_FOLLOWER
            self.kinds[head] = sp.kind
            off += sp.size

        kinds_arr = np.array([k.value for k in self.kinds])
        self.ovm_mask = (kinds_arr == ModelKind.HDV_OVM.value) | (
            kinds_arr == ModelKind.LEADER_NO_CONNECTION.value
        )
        self.fol_idx = np.flatnonzero(kinds_arr == ModelKind.PLATOON_FOLLOWER.value)
        self.fol_head = self.heads_g[self.platoon_id[self.fol_idx]]
        self.fol_cnt = self.sizes[self.platoon_id[self.fol_idx]] - self.j_index[self.fol_idx]

        tw_pl = [
            i
            for i, sp in enumerate(platoons)
            if sp.kind in (ModelKind.LEADER_TWO_WAY_CONNECTED, ModelKind.LEADER_FRONT_CONNECTED)
        ]
        self.tw_pl = np.asarray(tw_pl, dtype=int)
        self.has_twoway = len(tw_pl) > 0
        if self.has_twoway:
            self.tw_idx = self.heads_g[self.tw_pl]
            # front-connected heads are the two-way law with the rear weight off
            self.tw_p = np.where(
                [platoons[i].kind == ModelKind.LEADER_FRONT_CONNECTED for i in tw_pl],
                0.0,
                control.p,
            )
            front_pl = (self.tw_pl + 1) % m
            rear_pl = (self.tw_pl - 1) % m
            self.tw_front_pl = front_pl
            self.tw_rear_pl = rear_pl
            # head-to-head front gap spans the body of the platoon ahead; the
            # rear gap spans this platoon's own body
            self.tw_front_size = self.sizes[front_pl]
            self.tw_rear_size = self.sizes[self.tw_pl]
            self.tw_front_wrap = np.where(self.tw_pl == m - 1, ring.length_m, 0.0)
            self.tw_rear_wrap = np.where(self.tw_pl == 0, ring.length_m, 0.0)


def _record_count(n_steps: int, record_every: int) -> int:
    return n_steps // record_every + 1


def run(config, initial_state=None) -> Trajectory:
    """Integrate a scenario and return its recorded trajectory.

    Per vehicle and step: model-law acceleration, then the safety overlay,
    then the synchronous modified-Euler update.  Deterministic given the
    scenario's seed.  ``initial_state`` may supply an (x0, v0) pair to bypass
    the seeded initial conditions.

    Raises ``CollisionError`` when any headway becomes non-positive and
    ``NumericsError`` when an applied acceleration is non-finite.
    """
    config.validate()
    ring: RingRoad = config.ring
    control: ControlParams = config.control
    safety: SafetyParams = config.safety
    ovp: OVParams = config.ov
    sc: SimConfig = config.sim

    table = _VehicleTable(config.platoons, ring, control)
    n = ring.n_vehicles
    dt = sc.dt
    n_steps = int(round(sc.horizon / dt))

    if initial_state is None:
        from .scenario import init_conditions

        x, v = init_conditions(config)
    else:
        x0, v0 = initial_state
        x = np.array(x0, dtype=float, copy=True)
        v = np.array(v0, dtype=float, copy=True)
        if x.shape != (n,) or v.shape != (n,):
            raise ValueError(f"initial state must have shape ({n},)")

    n_rec = _record_count(n_steps, sc.record_every)
    times = np.empty(n_rec)
    pos = np.empty((n_rec, n))
    vel = np.empty((n_rec, n))
    acc = np.empty((n_rec, n))
    rec = 0

    def partial(upto: int, event=None) -> Trajectory:
        return Trajectory(
            times=times[:upto].copy(),
            pos=pos[:upto].copy(),
            vel=vel[:upto].copy(),
            acc=acc[:upto].copy(),
            platoon_id=table.platoon_id,
            index_in_platoon=table.j_index,
            kinds=list(table.kinds),
            config=config,
            collision=event,
        )

    # delayed head positions live in a small circular buffer; before the run
    # has aged past t_d the initial head positions stand in as the history
    d_steps = int(round(control.t_d / dt)) if table.has_twoway else 0
    if table.has_twoway:
        hist = np.empty((d_steps + 1, len(table.heads_g)))
        heads0 = x[table.heads_g].copy()

    raw = np.empty(n)
    a = control.a
    for k in range(n_steps + 1):
        t = k * dt
        gaps = ring_gaps(ring, x)
        if np.any(gaps <= 0.0):
            behind = int(np.argmin(gaps))
            event = CollisionEvent(time_s=t, behind=behind, ahead=(behind + 1) % n)
            raise CollisionError(event, partial(rec, event))

        if table.has_twoway:
            hist[k % (d_steps + 1)] = x[table.heads_g]
            delayed = hist[(k - d_steps) % (d_steps + 1)] if k >= d_steps else heads0

        raw[table.ovm_mask] = accel_ovm(control, ovp, gaps[table.ovm_mask], v[table.ovm_mask])
        if len(table.fol_idx):
            raw[table.fol_idx] = accel_platoon_follower(
                control, ovp, x[table.fol_idx], v[table.fol_idx], x[table.fol_head], table.fol_cnt
            )
        if table.has_twoway:
            front_gap = delayed[table.tw_front_pl] - delayed[table.tw_pl] + table.tw_front_wrap
            rear_gap = delayed[table.tw_pl] - delayed[table.tw_rear_pl] + table.tw_rear_wrap
            v_front = ov(ovp, front_gap / table.tw_front_size)
            v_rear = ov(ovp, rear_gap / table.tw_rear_size)
            raw[table.tw_idx] = a * (
                (1.0 + table.tw_p) * v_front - table.tw_p * v_rear - v[table.tw_idx]
            )

        applied = safety_overlay(safety, raw, v, np.roll(v, -1), gaps)
        if not np.all(np.isfinite(applied)):
            vehicle = int(np.flatnonzero(~np.isfinite(applied))[0])
            raise NumericsError(vehicle, k, t)

        if k % sc.record_every == 0:
            times[rec] = t
            pos[rec] = x
            vel[rec] = v
            acc[rec] = applied
            rec += 1

        if k == n_steps:
            break
        v_new = v + applied * dt
        x = x + 0.5 * (v + v_new) * dt
        v = v_new

    return Trajectory(
        times=times,
        pos=pos,
        vel=vel,
        acc=acc,
        platoon_id=table.platoon_id,
        index_in_platoon=table.j_index,
        kinds=list(table.kinds),
        config=config,
        collision=None,
    )
