import math

import numpy as np
import pytest

from nvsim.physics.dressed_analytics import (
    PolaronParams,
    phonon_rabi,
    polaron_params,
    resonant_coupling,
    resonant_drive_frequency,
    rwa_matrix,
    splitting_contribution,
    total_splitting,
)
from nvsim.physics.floquet import bessel_j
from nvsim.physics.params import DriveParams, MixingAngle, StaticStrain


NV2 = StaticStrain(v_e1=1.529, v_e2=0.473)


def nv2(amp_e1, omega_m=None, strain=NV2):
    """NV2 with the two-phonon resonance 2·ω_m = 2Δx unless omega_m is given."""
    omega_m = strain.delta_x if omega_m is None else omega_m
    return polaron_params(strain, DriveParams(amp_a1=-1.5, amp_e1=amp_e1, omega_m=omega_m))


def test_no_drive_no_coupling():
    p = nv2(0.0)
    assert all(phonon_rabi(n, p) == 0.0 for n in range(5))
    assert resonant_coupling(0, p) == 0.0


def test_phonon_rabi_formula():
    p = nv2(0.6)
    z = 2 * 0.6 * p.theta.cos2 / p.omega_m
    assert phonon_rabi(1, p) == pytest.approx(0.6 * p.theta.sin2 * bessel_j(1, z), rel=1e-14)


def test_maximal_mixing_only_single_phonon():
    p = polaron_params(StaticStrain(v_e1=0.0, v_e2=1.0), DriveParams(amp_e1=0.4, omega_m=2.0))
    assert p.theta.theta == pytest.approx(math.pi / 4)
    assert phonon_rabi(0, p) == pytest.approx(0.4)
    assert all(abs(phonon_rabi(n, p)) < 1e-12 for n in range(1, 5))


def test_mirror_angle_flips_coupling_keeps_splitting():
    plus = nv2(0.6, strain=StaticStrain(v_e1=1.529, v_e2=0.473))
    minus = nv2(0.6, strain=StaticStrain(v_e1=1.529, v_e2=-0.473))
    for n in range(4):
        assert phonon_rabi(n, minus) == pytest.approx(-phonon_rabi(n, plus))
        assert splitting_contribution(n, minus) == pytest.approx(splitting_contribution(n, plus))


def test_on_resonance_splitting_is_twice_coupling():
    # (n+1)·ω_m = 2Δx exactly
    p = PolaronParams(theta=MixingAngle(0.15), delta_x=1.6, amp_a1=0.0, amp_e1=0.8, omega_m=3.2 / 2)
    assert splitting_contribution(1, p) == pytest.approx(2 * abs(phonon_rabi(1, p)), rel=1e-12)


def test_splitting_vanishes_without_drive_off_resonance():
    p = nv2(0.0, omega_m=1.3844)
    assert all(splitting_contribution(n, p) == 0.0 for n in range(8))


@pytest.mark.parametrize("amp_e1", [-1.2, 0.05, 0.9])
@pytest.mark.parametrize("omega_m", [0.7, 1.6, 5.0])
def test_splitting_is_never_negative(amp_e1, omega_m):
    p = PolaronParams(theta=MixingAngle(-0.3), delta_x=1.6, amp_a1=0.0, amp_e1=amp_e1, omega_m=omega_m)
    assert all(splitting_contribution(n, p) >= 0.0 for n in range(10))


def test_two_phonon_order_dominates_nv2():
    for amp in np.linspace(0.01, 1.5, 40):
        breakdown = total_splitting(nv2(float(amp)))
        assert breakdown.dominant == 2


def test_total_follows_dominant_order_at_its_maximum():
    amps = np.linspace(0.01, 3.0, 300)
    s2 = [splitting_contribution(1, nv2(float(a))) for a in amps]
    best = nv2(float(amps[int(np.argmax(s2))]))
    breakdown = total_splitting(best)
    assert breakdown.total == pytest.approx(math.sqrt(breakdown.per_order[2]), rel=0.1)


def test_total_splitting_combinations():
    p = nv2(0.6)
    root = total_splitting(p, max_order=6)
    quad = total_splitting(p, max_order=6, combine="quadrature")
    values = np.array(list(root.per_order.values()))
    assert root.total == pytest.approx(math.sqrt(values.sum()))
    assert quad.total == pytest.approx(math.sqrt(np.sum(values**2)))
    assert sorted(root.per_order) == [1, 2, 3, 4, 5, 6]
    assert root.fraction(6) == pytest.approx(1.0)
    assert total_splitting(nv2(0.0)).total == 0.0
    with pytest.raises(ValueError):
        total_splitting(p, combine="sum")


def test_resonant_coupling_tends_to_half_rabi_for_weak_drive():
    p = nv2(0.01, omega_m=2 * NV2.delta_x)
    assert resonant_coupling(0, p) == pytest.approx(0.5 * phonon_rabi(0, p), rel=1e-3)


def test_rwa_gap_on_single_phonon_resonance():
    p = nv2(0.6, omega_m=2 * NV2.delta_x)
    times = np.arange(200) / (200 * p.omega_m)
    averaged = np.mean([rwa_matrix(p, t) for t in times], axis=0)
    values = np.linalg.eigvalsh(averaged)
    assert values[1] - values[0] == pytest.approx(2 * abs(0.6 * p.theta.sin2), rel=1e-9)


def test_rwa_without_drive_is_diagonal():
    p = PolaronParams(theta=MixingAngle(0.2), delta_x=1.6, amp_a1=0.0, amp_e1=0.0, omega_m=1.0)
    np.testing.assert_allclose(rwa_matrix(p, 0.3), np.diag([0.6, -1.6]), atol=1e-15)


def test_invalid_regime_warns():
    with pytest.warns(RuntimeWarning):
        p = nv2(3.0, omega_m=0.5)
    assert not p.valid


def test_resonant_drive_frequency():
    assert resonant_drive_frequency(1.62) == pytest.approx(3.24)
    assert resonant_drive_frequency(1.6, phonons=2) == pytest.approx(1.6)
    with pytest.raises(ValueError):
        resonant_drive_frequency(1.6, phonons=0)
