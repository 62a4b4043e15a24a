"""Engine behavior: equilibrium persistence, reduction to a reference
integrator, conservation, determinism, collisions, and recording."""

import math

import numpy as np
import pytest

from platoonsim.models import (
    ControlParams,
    ModelKind,
    SafetyParams,
    accel_leader_twoway,
    safety_overlay,
)
from platoonsim.ovfunc import OVParams
from platoonsim.scenario import (
    PlatoonSpec,
    ScenarioConfig,
    build_uniform,
    equilibrium_state,
    init_conditions,
)
from platoonsim.sim import (
    CollisionError,
    NumericsError,
    RingRoad,
    SimConfig,
    headway,
    ring_gaps,
    run,
)


def make_config(platoons, ring, *, seed=0, a=0.6, p=0.3, t_d=0.0, dt=0.1,
                horizon=10.0, record_every=1, perturbation=0.0):
    cfg = ScenarioConfig(
        ring=ring,
        platoons=tuple(PlatoonSpec(size=s, kind=k) for s, k in platoons),
        control=ControlParams(a=a, p=p, t_d=t_d),
        safety=SafetyParams(),
        ov=OVParams(),
        sim=SimConfig(dt=dt, horizon=horizon, record_every=record_every),
        seed=seed,
        perturbation=perturbation,
    )
    cfg.validate()
    return cfg


def test_ring_road_validation():
    with pytest.raises(ValueError):
        RingRoad(length_m=0.0, n_vehicles=10)
    with pytest.raises(ValueError):
        RingRoad(length_m=100.0, n_vehicles=1)
    assert RingRoad(length_m=264.0, n_vehicles=12).headway_eq == 22.0


def test_sim_config_validation():
    with pytest.raises(ValueError):
        SimConfig(dt=0.0)
    with pytest.raises(ValueError):
        SimConfig(dt=0.1, horizon=0.05)
    with pytest.raises(ValueError):
        SimConfig(record_every=0)


def test_headway_wrap(ring12):
    assert headway(ring12, 10.0, 35.0) == 25.0
    assert headway(ring12, 250.0, 8.0, wrap=True) == 22.0


def test_ring_gaps(ring12):
    x = 22.0 * np.arange(1, 13)
    gaps = ring_gaps(ring12, x)
    assert gaps.shape == (12,)
    assert np.allclose(gaps, 22.0, atol=1e-12)
    x[0] -= 1.0
    gaps = ring_gaps(ring12, x)
    assert gaps[0] == 23.0 and gaps[-1] == 21.0


@pytest.mark.parametrize(
    "kind,t_d",
    [
        (ModelKind.LEADER_NO_CONNECTION, 0.0),
        (ModelKind.LEADER_FRONT_CONNECTED, 0.0),
        (ModelKind.LEADER_TWO_WAY_CONNECTED, 0.0),
        (ModelKind.LEADER_TWO_WAY_CONNECTED, 0.8),
    ],
)
def test_equilibrium_persists(ring12, kind, t_d):
    cfg = make_config([(4, kind)] * 3, ring12, t_d=t_d, horizon=20.0)
    traj = run(cfg)
    assert np.abs(traj.acc).max() <= 1e-12
    hw = np.roll(traj.pos, -1, axis=1) - traj.pos
    hw[:, -1] += ring12.length_m
    assert np.abs(hw - 22.0).max() < 1e-9
    assert np.abs(traj.vel - traj.vel[0, 0]).max() < 1e-12


def test_equilibrium_persists_with_hdvs(ring12):
    platoons = [(4, ModelKind.LEADER_NO_CONNECTION), (1, ModelKind.HDV_OVM)] * 2 + [
        (1, ModelKind.HDV_OVM)
    ] * 2
    cfg = make_config(platoons, ring12, horizon=20.0)
    traj = run(cfg)
    assert np.abs(traj.acc).max() <= 1e-12


def reference_hdv_ring(L, n, x0, v0, steps, dt):
    """Independent scalar reimplementation of the single-vehicle following law
    with the braking overlay and the same two-stage update."""
    a, a_m, a_b, tau, l = 0.6, 3.0, -8.0, 4.0, 5.0
    h_s, h_f, v_f = 7.0, 37.0, 20.0

    def vopt(h):
        s = (h - h_s) / (h_f - h_s)
        s = 0.0 if s < 0.0 else (1.0 if s > 1.0 else s)
        return 0.5 * v_f * (1.0 - math.cos(math.pi * s))

    x = [float(q) for q in x0]
    v = [float(q) for q in v0]
    for _ in range(steps):
        gaps = [x[(i + 1) % n] - x[i] + (L if i == n - 1 else 0.0) for i in range(n)]
        applied = []
        for i in range(n):
            raw = a * (vopt(gaps[i]) - v[i])
            dv = v[i] - v[(i + 1) % n]
            h_m = dv * dv / (2.0 * abs(a_b)) + tau * dv + l
            applied.append(a_b if gaps[i] < h_m else min(raw, a_m))
        v_new = [v[i] + applied[i] * dt for i in range(n)]
        x = [x[i] + 0.5 * (v[i] + v_new[i]) * dt for i in range(n)]
        v = v_new
    return np.array(x), np.array(v)


def test_engine_matches_reference_integrator(ring12):
    cfg = make_config([(1, ModelKind.HDV_OVM)] * 12, ring12, seed=2,
                      horizon=20.0, perturbation=2.5)
    traj = run(cfg)
    x0, v0 = init_conditions(cfg)
    x_ref, v_ref = reference_hdv_ring(ring12.length_m, 12, x0, v0, 200, 0.1)
    assert np.abs(traj.pos[-1] - x_ref).max() < 1e-12
    assert np.abs(traj.vel[-1] - v_ref).max() < 1e-12


def test_ring_conservation(ring24):
    cfg = make_config([(4, ModelKind.LEADER_TWO_WAY_CONNECTED)] * 6, ring24,
                      seed=7, t_d=0.4, horizon=50.0, perturbation=2.5)
    traj = run(cfg)
    hw = np.roll(traj.pos, -1, axis=1) - traj.pos
    hw[:, -1] += ring24.length_m
    assert np.abs(hw.sum(axis=1) - ring24.length_m).max() < 1e-6


def test_translation_invariance(ring12):
    cfg = make_config([(3, ModelKind.LEADER_NO_CONNECTION)] * 4, ring12,
                      seed=5, horizon=20.0, perturbation=2.5)
    x0, v0 = init_conditions(cfg)
    base = run(cfg, initial_state=(x0, v0))
    shifted = run(cfg, initial_state=(x0 + 1000.0, v0))
    assert np.abs(shifted.pos - 1000.0 - base.pos).max() < 1e-9
    assert np.abs(shifted.vel - base.vel).max() < 1e-9


def test_determinism_bitwise(ring24):
    cfg = make_config([(2, ModelKind.LEADER_NO_CONNECTION)] * 12, ring24,
                      seed=3, horizon=30.0, perturbation=2.5)
    t1 = run(cfg)
    t2 = run(cfg)
    assert np.array_equal(t1.pos, t2.pos)
    assert np.array_equal(t1.vel, t2.vel)
    assert np.array_equal(t1.acc, t2.acc)


def test_collision_aborts_with_event(ring12):
    x = 22.0 * np.arange(1, 13)
    v = np.full(12, 10.0)
    v[0] = 40.0  # closing at 30 m/s on a 22 m gap
    cfg = make_config([(1, ModelKind.HDV_OVM)] * 12, ring12, horizon=10.0)
    with pytest.raises(CollisionError) as exc:
        run(cfg, initial_state=(x, v))
    event = exc.value.event
    assert event.behind == 0 and event.ahead == 1
    assert 0.0 < event.time_s < 5.0
    partial = exc.value.trajectory
    assert partial.collision is event
    assert len(partial.times) < 101
    assert partial.pos.shape[0] == len(partial.times)


def test_collision_at_start_yields_empty_trajectory(ring12):
    x = 22.0 * np.arange(1, 13)
    x[1] = x[0]  # zero gap before the first step
    v = np.full(12, 10.0)
    cfg = make_config([(1, ModelKind.HDV_OVM)] * 12, ring12, horizon=10.0)
    with pytest.raises(CollisionError) as exc:
        run(cfg, initial_state=(x, v))
    assert exc.value.event.time_s == 0.0
    assert len(exc.value.trajectory.times) == 0


def test_non_finite_state_aborts(ring12):
    x = 22.0 * np.arange(1, 13)
    v = np.full(12, 10.0)
    v[4] = np.nan
    cfg = make_config([(1, ModelKind.HDV_OVM)] * 12, ring12, horizon=10.0)
    with pytest.raises(NumericsError) as exc:
        run(cfg, initial_state=(x, v))
    assert exc.value.vehicle == 4
    assert exc.value.step == 0


def test_initial_state_shape_checked(ring12):
    cfg = make_config([(1, ModelKind.HDV_OVM)] * 12, ring12)
    with pytest.raises(ValueError):
        run(cfg, initial_state=(np.zeros(5), np.zeros(5)))


def test_record_decimation():
    ring = RingRoad(length_m=264.0, n_vehicles=12)
    cfg = make_config([(1, ModelKind.HDV_OVM)] * 12, ring, horizon=10.0,
                      record_every=3, perturbation=0.0)
    traj = run(cfg)
    assert len(traj.times) == 100 // 3 + 1
    assert traj.times[0] == 0.0
    assert traj.times[-1] == pytest.approx(9.9, abs=1e-12)

    cfg = make_config([(1, ModelKind.HDV_OVM)] * 12, ring, horizon=1.0,
                      record_every=7, perturbation=0.0)
    traj = run(cfg)
    assert list(traj.times) == pytest.approx([0.0, 0.7], abs=1e-12)


def test_vehicle_metadata():
    ring = RingRoad(length_m=220.0, n_vehicles=10)
    cfg = make_config(
        [
            (3, ModelKind.LEADER_TWO_WAY_CONNECTED),
            (2, ModelKind.LEADER_FRONT_CONNECTED),
            (4, ModelKind.LEADER_NO_CONNECTION),
            (1, ModelKind.HDV_OVM),
        ],
        ring,
        horizon=0.1,
    )
    traj = run(cfg)
    assert list(traj.platoon_id) == [0, 0, 0, 1, 1, 2, 2, 2, 2, 3]
    assert list(traj.index_in_platoon) == [1, 2, 3, 1, 2, 1, 2, 3, 4, 1]
    F = ModelKind.PLATOON_FOLLOWER
    assert traj.kinds == [
        F, F, ModelKind.LEADER_TWO_WAY_CONNECTED,
        F, ModelKind.LEADER_FRONT_CONNECTED,
        F, F, F, ModelKind.LEADER_NO_CONNECTION,
        ModelKind.HDV_OVM,
    ]
    assert traj.n_vehicles == 10


def test_negative_speeds_are_allowed(ring12):
    # a slow vehicle trapped below its safe headway brakes through zero speed
    x = np.array([3.0, 6.0, 13.0, 40.0, 67.0, 94.0, 121.0, 148.0, 175.0, 203.0, 230.0, 237.0])
    v = np.array([2.0, 0.0, 10.0, 10.0, 10.0, 10.0, 10.0, 10.0, 10.0, 10.0, 0.0, 0.0])
    cfg = make_config([(1, ModelKind.HDV_OVM)] * 12, ring12, horizon=1.0)
    traj = run(cfg, initial_state=(x, v))
    assert traj.vel.min() < 0.0


def test_twoway_head_accels_match_model_law():
    # mixed platoon sizes: front gap spans the platoon ahead, rear gap our own
    ring = RingRoad(length_m=198.0, n_vehicles=9)
    sizes = [3, 2, 4]
    cfg = make_config([(s, ModelKind.LEADER_TWO_WAY_CONNECTED) for s in sizes],
                      ring, horizon=0.1)
    rng = np.random.default_rng(8)
    x = 22.0 * np.arange(1, 10) + rng.uniform(-0.5, 0.5, 9)
    v = 10.0 + rng.uniform(-0.5, 0.5, 9)
    traj = run(cfg, initial_state=(x, v))

    heads = [2, 4, 8]
    gaps = ring_gaps(ring, x)
    for i, g in enumerate(heads):
        front_head = heads[(i + 1) % 3]
        rear_head = heads[(i - 1) % 3]
        front_gap = x[front_head] - x[g] + (ring.length_m if i == 2 else 0.0)
        rear_gap = x[g] - x[rear_head] + (ring.length_m if i == 0 else 0.0)
        raw = accel_leader_twoway(
            cfg.control, cfg.ov, front_gap, sizes[(i + 1) % 3], rear_gap, sizes[i], v[g]
        )
        expected = safety_overlay(cfg.safety, raw, v[g], v[(g + 1) % 9], gaps[g])
        assert traj.acc[0, g] == pytest.approx(expected, abs=1e-12)


def test_delayed_gaps_use_history():
    # after one delay interval the leader must react to old head positions
    ring = RingRoad(length_m=132.0, n_vehicles=6)
    sizes = [3, 3]
    t_d = 0.3
    cfg = make_config([(s, ModelKind.LEADER_TWO_WAY_CONNECTED) for s in sizes],
                      ring, t_d=t_d, horizon=2.0)
    rng = np.random.default_rng(9)
    x = 22.0 * np.arange(1, 7) + rng.uniform(-0.8, 0.8, 6)
    v = 10.0 + rng.uniform(-0.8, 0.8, 6)
    traj = run(cfg, initial_state=(x, v))

    heads = [2, 5]
    k = 7  # any step at least d_steps = 3 past the start
    x_then = traj.pos[k - 3]
    x_now = traj.pos[k]
    v_now = traj.vel[k]
    gaps_now = ring_gaps(ring, x_now)
    for i, g in enumerate(heads):
        front_head = heads[(i + 1) % 2]
        rear_head = heads[(i - 1) % 2]
        front_gap = x_then[front_head] - x_then[g] + (ring.length_m if i == 1 else 0.0)
        rear_gap = x_then[g] - x_then[rear_head] + (ring.length_m if i == 0 else 0.0)
        raw = accel_leader_twoway(
            cfg.control, cfg.ov, front_gap, sizes[(i + 1) % 2], rear_gap, sizes[i], v_now[g]
        )
        expected = safety_overlay(cfg.safety, raw, v_now[g], v_now[(g + 1) % 6], gaps_now[g])
        assert traj.acc[k, g] == pytest.approx(expected, abs=1e-12)
