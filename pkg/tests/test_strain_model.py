import math

import numpy as np
import pytest

from nvsim.errors import DegenerateStrain
from nvsim.physics.params import MixingAngle, StaticStrain, StressCoupling
from nvsim.physics.strain_model import (
    extract_mixing_angle,
    ideal_drive_ratio,
    mixing_angle,
    polarization_curve,
    static_splitting,
    strain_from_splitting,
    stress_to_drive,
)


def test_mixing_angle_matches_strain_ratio(nv2_strain):
    theta = mixing_angle(nv2_strain).theta
    assert math.tan(2 * theta) == pytest.approx(nv2_strain.v_e2 / nv2_strain.v_e1, rel=1e-12)
    assert -math.pi / 4 <= theta <= math.pi / 4


def test_mixing_angle_folds_into_range():
    strain = StaticStrain(v_e1=-1.0, v_e2=0.1)
    theta = mixing_angle(strain).theta
    assert -math.pi / 4 <= theta <= math.pi / 4
    assert math.tan(2 * theta) == pytest.approx(strain.v_e2 / strain.v_e1, rel=1e-12)


def test_pure_e1_strain_has_zero_angle(nv1_strain):
    assert mixing_angle(nv1_strain).theta == 0.0


def test_mixing_angle_degenerate():
    with pytest.raises(DegenerateStrain):
        mixing_angle(StaticStrain(v_e1=0.0, v_e2=0.0))


def test_static_splitting_nv1(nv1_strain):
    assert static_splitting(nv1_strain) == pytest.approx(10.6)


def test_static_strain_rejects_nan():
    with pytest.raises(ValueError):
        StaticStrain(v_e1=float("nan"), v_e2=0.0)


def test_mixing_angle_range_enforced():
    with pytest.raises(ValueError):
        MixingAngle(1.0)


def test_strain_from_splitting_round_trip(nv2_strain):
    theta = mixing_angle(nv2_strain).theta
    rebuilt = strain_from_splitting(static_splitting(nv2_strain), theta)
    assert rebuilt.v_e1 == pytest.approx(nv2_strain.v_e1, rel=1e-12)
    assert rebuilt.v_e2 == pytest.approx(nv2_strain.v_e2, rel=1e-12)


def test_ideal_drive_ratio():
    assert ideal_drive_ratio() == pytest.approx(2 * 1.36 / 1.92)


def test_stress_to_drive_is_linear_and_aligned():
    one = stress_to_drive(1e7)
    two = stress_to_drive(2e7)
    assert two.amp_a1 == pytest.approx(2 * one.amp_a1)
    assert one.amp_e1 / one.amp_a1 == pytest.approx(ideal_drive_ratio())
    assert one.amp_e2 == 0.0
    # 1.92e-12 eV/Pa at 10 MPa is 19.2 µeV, i.e. ~4.64 GHz
    assert one.amp_a1 == pytest.approx(1.92e-5 / 4.135667696e-15 / 1e9, rel=1e-12)


def test_stress_to_drive_off_axis_feeds_e2():
    drive = stress_to_drive(1e7, StressCoupling(), off_axis=0.1, omega_m=1.6, phase=0.3)
    assert drive.amp_e2 > 0
    assert drive.omega_m == 1.6
    assert drive.phase == 0.3


def test_stress_to_drive_rejects_negative():
    with pytest.raises(ValueError):
        stress_to_drive(-1.0)


def test_polarization_unsaturated_is_malus_law():
    angles = np.linspace(0, math.pi, 37)
    curve = polarization_curve(0.2, 0.1, 0.0, angles)
    np.testing.assert_allclose(curve.pl_x, np.cos(angles - 0.3) ** 2, atol=1e-12)
    np.testing.assert_allclose(np.add(curve.pl_x, curve.pl_y), 1.0, atol=1e-12)


def test_polarization_saturated_peaks_at_dipole():
    angles = np.linspace(0, math.pi, 181)
    theta = MixingAngle(0.25)
    curve = polarization_curve(theta, 0.0, 5.0, angles)
    assert max(curve.pl_x) <= 1.0 and min(curve.pl_x) >= 0.0
    assert angles[int(np.argmax(curve.pl_x))] == pytest.approx(0.25, abs=math.pi / 180)
    # saturation flattens the curve relative to cos²
    mid = int(np.argmin(np.abs(angles - (0.25 + math.pi / 4))))
    assert curve.pl_x[mid] > 0.5


def test_extract_mixing_angle_round_trip():
    angles = np.linspace(0, math.pi, 91)
    curve = polarization_curve(-0.31, 0.05, 2.0, angles)
    assert extract_mixing_angle(curve, 0.05, 2.0).theta == pytest.approx(-0.31, abs=1e-6)
