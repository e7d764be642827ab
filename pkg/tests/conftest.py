from __future__ import annotations

from pathlib import Path

import pytest

from nvsim.config import NvsimConfig
from nvsim.physics.params import DriveParams, OpticalParams, StaticStrain

REPO_ROOT = Path(__file__).resolve().parent.parent


@pytest.fixture
def configs_dir() -> Path:
    return Path(NvsimConfig.CONFIG_DIR)


@pytest.fixture
def nv1_strain() -> StaticStrain:
    """2Δx = 10.6 GHz, strain along E1 only."""
    return StaticStrain(v_e1=5.3, v_e2=0.0)


@pytest.fixture
def nv2_strain() -> StaticStrain:
    """2Δx = 3.2 GHz with a rotated dipole basis."""
    return StaticStrain(v_e1=1.529, v_e2=0.473)


@pytest.fixture
def rabi_strain() -> StaticStrain:
    """2Δx = 3.24 GHz, same rotation as NV2."""
    return StaticStrain(v_e1=1.548, v_e2=0.479)


@pytest.fixture
def weak_laser() -> OpticalParams:
    return OpticalParams(delta=0.0, omega=0.1, gamma=0.1)


@pytest.fixture
def nv1_drive() -> DriveParams:
    return DriveParams(amp_a1=2.0, amp_e1=-0.8, omega_m=1.3844)
