"""Multi-platoon car-following on a single-lane ring road: simulation and
linear stability analysis for connected platoons mixed with human-driven
vehicles."""

from .metrics import (
    RunSummary,
    headway_series,
    headways_over_time,
    max_headway_dev,
    ring_conservation_error,
    speed_envelope,
    stabilization_time,
    summarize,
)
from .models import (
    ControlParams,
    ModelKind,
    SafetyParams,
    accel_leader_noconn,
    accel_leader_twoway,
    accel_ovm,
    accel_platoon_follower,
    safety_headway,
    safety_overlay,
)
from .ovfunc import OVParams, fundamental_diagram, ov, ov_prime
from .scenario import (
    ConfigError,
    PlatoonSpec,
    ScenarioConfig,
    build_evenly_mixed,
    build_segregated,
    build_uniform,
    equilibrium_state,
    init_conditions,
)
from .sim import (
    CollisionError,
    CollisionEvent,
    NumericsError,
    RingRoad,
    SimConfig,
    Trajectory,
    headway,
    ring_gaps,
    run,
)
from .stability import (
    UNSTABLE_FOR_ALL_A,
    CharacteristicRoot,
    StabilityQuery,
    StabilityResult,
    char_root_residual,
    char_roots,
    classify,
    crit_noconn,
    crit_twoway,
    dominant_head_mode,
    eig_oracle,
    neutral_line,
)

__version__ = "0.1.0"
