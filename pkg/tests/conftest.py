"""Shared fixtures: default parameter sets and small fast ring scenarios."""

import numpy as np
import pytest

from platoonsim.models import ControlParams, SafetyParams
from platoonsim.ovfunc import OVParams
from platoonsim.sim import RingRoad


@pytest.fixture
def ovp():
    return OVParams(h_s=7.0, h_f=37.0, v_f=20.0)


@pytest.fixture
def control():
    return ControlParams(a=0.6, p=0.3, t_d=0.0)


@pytest.fixture
def safety():
    return SafetyParams(a_m=3.0, a_b=-8.0, tau=4.0, l=5.0)


@pytest.fixture
def ring24():
    """24 vehicles at the default 22 m equilibrium headway."""
    return RingRoad(length_m=528.0, n_vehicles=24)


@pytest.fixture
def ring12():
    """12 vehicles at the default 22 m equilibrium headway."""
    return RingRoad(length_m=264.0, n_vehicles=12)


@pytest.fixture
def rng():
    return np.random.default_rng(42)
