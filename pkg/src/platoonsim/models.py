"""Vehicle-level acceleration laws and the emergency-braking safety overlay.

All laws share the relaxation form  a * (target speed - own speed).  The
target depends on the vehicle's role:

* ``HDV_OVM`` / ``LEADER_NO_CONNECTION``: optimal velocity of the gap to the
  vehicle directly ahead.
* ``PLATOON_FOLLOWER``: optimal velocity of the average gap to its own platoon
  head, i.e. (head position - own position) / (number of gaps in between).
* ``LEADER_TWO_WAY_CONNECTED``: a (1+p)/-p blend of the average front and rear
  platoon gaps, both sampled with the communication delay.
  ``LEADER_FRONT_CONNECTED`` is exactly the same law with p = 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .ovfunc import OVParams, ov

__all__ = [
    "ModelKind",
    "ControlParams",
    "SafetyParams",
    "accel_ovm",
    "accel_platoon_follower",
    "accel_leader_noconn",
    "accel_leader_twoway",
    "safety_headway",
    "safety_overlay",
]


class ModelKind(str, Enum):
    """Which acceleration law a vehicle runs."""

    HDV_OVM = "hdv_ovm"
    PLATOON_FOLLOWER = "platoon_follower"
    LEADER_NO_CONNECTION = "leader_no_connection"
    LEADER_FRONT_CONNECTED = "leader_front_connected"
    LEADER_TWO_WAY_CONNECTED = "leader_two_way_connected"


LEADER_KINDS = (
    ModelKind.LEADER_NO_CONNECTION,
    ModelKind.LEADER_FRONT_CONNECTED,
    ModelKind.LEADER_TWO_WAY_CONNECTED,
)


@dataclass(frozen=True)
class ControlParams:
    """Sensitivity a (1/s), rear smoothing weight p, communication delay t_d (s)."""

    a: float = 0.6
    p: float = 0.3
    t_d: float = 0.0

    def __post_init__(self):
        if self.a <= 0.0:
            raise ValueError(f"sensitivity a must be positive, got {self.a}")
        if self.p < 0.0:
            raise ValueError(f"rear smoothing weight p must be >= 0, got {self.p}")
        if self.t_d < 0.0:
            raise ValueError(f"delay t_d must be >= 0, got {self.t_d}")


@dataclass(frozen=True)
class SafetyParams:
    """Emergency-braking overlay parameters.

    a_m : maximum acceleration (m/s^2), upper clamp on every law's output.
    a_b : emergency braking deceleration (m/s^2), strictly negative.
    tau : reaction-time headway term (s).
    l   : vehicle length / standstill buffer (m).
    """

    a_m: float = 3.0
    a_b: float = -8.0
    tau: float = 4.0
    l: float = 5.0

    def __post_init__(self):
        if self.a_m <= 0.0:
            raise ValueError(f"a_m must be positive, got {self.a_m}")
        if self.a_b >= 0.0:
            raise ValueError(f"a_b must be negative, got {self.a_b}")
        if self.tau < 0.0:
            raise ValueError(f"tau must be >= 0, got {self.tau}")
        if self.l <= 0.0:
            raise ValueError(f"l must be positive, got {self.l}")


def accel_ovm(control: ControlParams, ovp: OVParams, headway, speed):
    """Plain optimal-velocity relaxation toward the gap ahead."""
    return control.a * (ov(ovp, headway) - speed)


def accel_platoon_follower(control: ControlParams, ovp: OVParams, x_self, v_self, x_head, gap_count):
    """In-platoon follower: relax toward the average gap to the platoon head.

    ``gap_count`` is the number of vehicle gaps between this vehicle and its
    head (head index minus own index), at least 1.
    """
    gap_count = np.asarray(gap_count)
    if np.any(gap_count < 1):
        raise ValueError("gap_count must be >= 1")
    avg_gap = (np.asarray(x_head, dtype=float) - np.asarray(x_self, dtype=float)) / gap_count
    return control.a * (ov(ovp, avg_gap) - v_self)


def accel_leader_noconn(control: ControlParams, ovp: OVParams, headway, speed):
    """Unconnected platoon leader: plain OVM on the gap to the vehicle ahead."""
    return accel_ovm(control, ovp, headway, speed)


def accel_leader_twoway(
    control: ControlParams,
    ovp: OVParams,
    delayed_front_gap,
    front_size,
    delayed_rear_gap,
    rear_size,
    self_speed,
):
    """Two-way connected platoon leader.

    The gaps are head-to-head spacings to the platoons ahead and behind,
    sampled at time t - t_d, each normalized by the number of vehicle gaps it
    spans (``front_size``/``rear_size``, at least 1).  The front term carries
    weight 1+p and the rear term weight -p, so a closing platoon behind pushes
    the leader forward.  With p = 0 this is the front-connected law.
    """
    front_size = np.asarray(front_size)
    rear_size = np.asarray(rear_size)
    if np.any(front_size < 1) or np.any(rear_size < 1):
        raise ValueError("front_size and rear_size must be >= 1")
    p = control.p
    v_front = ov(ovp, np.asarray(delayed_front_gap, dtype=float) / front_size)
    v_rear = ov(ovp, np.asarray(delayed_rear_gap, dtype=float) / rear_size)
    return control.a * ((1.0 + p) * v_front - p * v_rear - self_speed)


def safety_headway(safety: SafetyParams, v_self, v_front):
    """Minimum safe headway (m) against the vehicle directly ahead.

    Braking-distance difference at deceleration |a_b| plus a reaction term and
    the vehicle-length buffer; may be below l when the front vehicle is faster.
    """
    dv = np.asarray(v_self, dtype=float) - np.asarray(v_front, dtype=float)
    return dv * dv / (2.0 * abs(safety.a_b)) + safety.tau * dv + safety.l


def safety_overlay(safety: SafetyParams, raw_accel, v_self, v_front, headway):
    """Final applied acceleration after the emergency-braking overlay.

    If the actual headway is below the safe headway the vehicle brakes at a_b;
    otherwise the raw model acceleration is clamped from above at a_m.  No
    symmetric lower clamp is applied outside the braking branch.
    """
    raw_accel = np.asarray(raw_accel, dtype=float)
    h_m = safety_headway(safety, v_self, v_front)
    out = np.where(np.asarray(headway, dtype=float) < h_m, safety.a_b, np.minimum(raw_accel, safety.a_m))
    return float(out) if out.ndim == 0 else out
