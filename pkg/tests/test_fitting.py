import numpy as np
import pytest

from nvsim.errors import NotConverged
from nvsim.experiments.fitting import FitResult, fit_drive_params, simulate_map, with_noise
from nvsim.experiments.sweeps import SpectrumMap, dressed_map
from nvsim.physics.params import DriveParams, OpticalParams, PulseSequence, StaticStrain

OPTICS = OpticalParams(omega=0.1, gamma=0.1)


def template(detunings, scalings):
    return SpectrumMap(
        detunings=detunings,
        amplitudes=scalings,
        pl=np.zeros((len(scalings), len(detunings))),
        scalings=scalings,
    )


@pytest.fixture
def nv1_target(nv1_strain):
    truth = DriveParams(amp_a1=13.0, amp_e1=-5.2, omega_m=1.3844)
    grid = template(np.linspace(-30, 30, 601), [0.5, 1.0])
    return simulate_map(grid, truth, nv1_strain, OPTICS, "sidebands"), truth


def test_fit_recovers_noiseless_drive(nv1_strain, nv1_target):
    target, truth = nv1_target
    initial = DriveParams(amp_a1=12.75, amp_e1=-5.1, omega_m=truth.omega_m)
    result = fit_drive_params(target, initial, nv1_strain, OPTICS, model="sidebands")
    assert result.converged
    assert result.amp_a1 == pytest.approx(13.0, rel=0.02)
    assert result.amp_e1 == pytest.approx(-5.2, rel=0.02)
    assert all(b <= a for a, b in zip(result.history, result.history[1:]))
    assert result.residual <= result.history[0]


def test_fit_from_truth_stops_immediately(nv1_strain, nv1_target):
    target, truth = nv1_target
    result = fit_drive_params(target, truth, nv1_strain, OPTICS, model="sidebands")
    assert result.converged
    assert result.iterations <= 2
    assert (result.amp_a1, result.amp_e1) == (13.0, -5.2)


def test_fit_tolerates_noise(nv1_strain, nv1_target):
    target, truth = nv1_target
    noisy = with_noise(target, 0.05, seed=7)
    initial = DriveParams(amp_a1=12.75, amp_e1=-5.1, omega_m=truth.omega_m)
    result = fit_drive_params(noisy, initial, nv1_strain, OPTICS, model="sidebands")
    assert result.amp_a1 == pytest.approx(13.0, rel=0.1)
    assert result.amp_e1 == pytest.approx(-5.2, rel=0.1)


@pytest.mark.parametrize(
    "strain,amp_a1,omega_m",
    [
        (StaticStrain(v_e1=5.3, v_e2=0.0), 13.0, 1.3844),
        (StaticStrain(v_e1=1.529, v_e2=0.473), -1.5, 1.6),
        (StaticStrain(v_e1=1.0, v_e2=0.32), -2.5, 1.3844),
    ],
)
def test_fitted_ratio_matches_stress_geometry(strain, amp_a1, omega_m):
    truth = DriveParams(amp_a1=amp_a1, amp_e1=-0.4 * amp_a1, omega_m=omega_m)
    target = simulate_map(template(np.linspace(-30, 30, 601), [0.5, 1.0]), truth, strain, OPTICS, "sidebands")
    initial = DriveParams(amp_a1=0.96 * amp_a1, amp_e1=-0.4 * 0.97 * amp_a1, omega_m=omega_m)
    result = fit_drive_params(target, initial, strain, OPTICS, model="sidebands")
    assert result.ratio == pytest.approx(-0.4, abs=0.05)


def test_strict_fit_raises_with_partial_result(nv1_strain, nv1_target):
    target, truth = nv1_target
    initial = DriveParams(amp_a1=11.0, amp_e1=-4.0, omega_m=truth.omega_m)
    with pytest.raises(NotConverged) as info:
        fit_drive_params(target, initial, nv1_strain, OPTICS, model="sidebands", max_iter=2, strict=True)
    partial = info.value.result
    assert isinstance(partial, FitResult)
    assert not partial.converged


def test_lenient_fit_reports_not_converged(nv1_strain, nv1_target):
    target, truth = nv1_target
    initial = DriveParams(amp_a1=11.0, amp_e1=-4.0, omega_m=truth.omega_m)
    result = fit_drive_params(target, initial, nv1_strain, OPTICS, model="sidebands", max_iter=2)
    assert not result.converged
    assert result.to_dict()["converged"] is False


def test_fit_respects_bounds(nv1_strain, nv1_target):
    target, truth = nv1_target
    initial = DriveParams(amp_a1=12.75, amp_e1=-5.1, omega_m=truth.omega_m)
    result = fit_drive_params(
        target, initial, nv1_strain, OPTICS, [(10.0, 12.8), (-6.0, -4.0)], model="sidebands", max_iter=200
    )
    assert 10.0 <= result.amp_a1 <= 12.8


def test_lindblad_forward_model_is_the_dressed_map(nv2_strain):
    drive = DriveParams(amp_a1=-1.5, amp_e1=0.6, omega_m=1.6)
    grid = template(np.linspace(-3, 3, 9), [0.5, 1.0])
    sequence = PulseSequence(collect=2.0)
    simulated = simulate_map(grid, drive, nv2_strain, OPTICS, "lindblad", sequence=sequence, workers=1)
    direct = dressed_map(grid.detunings, grid.scalings, drive, nv2_strain, OPTICS, sequence=sequence, workers=1)
    np.testing.assert_array_equal(simulated.pl, direct.pl)


def test_unknown_forward_model(nv1_strain, nv1_target):
    target, truth = nv1_target
    with pytest.raises(ValueError):
        simulate_map(target, truth, nv1_strain, OPTICS, "analytic")


def test_with_noise_is_seeded(nv1_target):
    target, _ = nv1_target
    a = with_noise(target, 0.05, seed=3)
    b = with_noise(target, 0.05, seed=3)
    np.testing.assert_array_equal(a.pl, b.pl)
    assert not np.array_equal(a.pl, target.pl)
    np.testing.assert_array_equal(with_noise(target, 0.0).pl, target.pl)


def test_lindblad_fit_recovers_drive(nv2_strain):
    truth = DriveParams(amp_a1=-1.5, amp_e1=0.6, omega_m=1.6)
    sequence = PulseSequence(collect=6.0)
    grid = template(np.linspace(-3, 3, 25), [0.5, 1.0])
    target = simulate_map(grid, truth, nv2_strain, OPTICS, "lindblad", sequence=sequence, workers=2)
    initial = DriveParams(amp_a1=-1.47, amp_e1=0.61, omega_m=1.6)
    result = fit_drive_params(
        target,
        initial,
        nv2_strain,
        OPTICS,
        model="lindblad",
        xatol=2e-3,
        max_iter=120,
        sequence=sequence,
        workers=2,
    )
    assert result.model == "lindblad"
    assert result.residual < 1e-3
    assert result.amp_a1 == pytest.approx(truth.amp_a1, rel=0.03)
    assert result.amp_e1 == pytest.approx(truth.amp_e1, rel=0.05)
