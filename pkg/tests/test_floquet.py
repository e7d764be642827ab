import math
from fractions import Fraction

import numpy as np
import pytest
from scipy.optimize import minimize_scalar

from nvsim.errors import OutOfRange, TruncationTooSmall
from nvsim.physics.floquet import (
    bessel_j,
    bessel_j_orders,
    build_floquet,
    central_weights,
    floquet_matrix,
    floquet_spectrum,
    fold_quasienergy,
    nearest_pair_gap,
    quasienergies,
    required_truncation,
    sideband_count,
    sideband_heights,
)
from nvsim.physics.lindblad import evolve, periodic_generator

J0_FIRST_ZERO = 2.404825557695773


def series_bessel(n, x):
    """Power series summed in exact rational arithmetic."""
    half = Fraction(x) / 2
    total = Fraction(0)
    term = half**n / math.factorial(n)
    k = 0
    while True:
        total += term
        k += 1
        term = -term * half * half / (k * (k + n))
        if k > n and abs(term) < Fraction(1, 10**30):
            break
    return float(total)


@pytest.mark.parametrize("x", [0.5, 1.0, 7.25, 12.5, 30.0])
@pytest.mark.parametrize("n", [0, 1, 5, 10, 20])
def test_bessel_matches_power_series(n, x):
    assert bessel_j(n, x) == pytest.approx(series_bessel(n, x), abs=1e-12)


def test_bessel_at_zero():
    assert bessel_j(0, 0.0) == 1.0
    assert bessel_j(3, 0.0) == 0.0


def test_bessel_symmetries():
    assert bessel_j(-3, 2.2) == pytest.approx(-bessel_j(3, 2.2), abs=1e-15)
    assert bessel_j(-4, 2.2) == pytest.approx(bessel_j(4, 2.2), abs=1e-15)
    assert bessel_j(3, -2.2) == pytest.approx(-bessel_j(3, 2.2), abs=1e-15)


@pytest.mark.parametrize("x", [0.3, 5.0, 9.39, 40.0])
def test_bessel_squares_sum_to_one(x):
    weights = sideband_heights(x, 1.0, 1.0, int(math.ceil(x)) + 20).weights
    assert weights.sum() == pytest.approx(1.0, abs=1e-10)


def test_bessel_out_of_range():
    with pytest.raises(OutOfRange):
        bessel_j_orders(3, 700.0)
    with pytest.raises(OutOfRange):
        bessel_j(0, float("nan"))


def test_required_truncation():
    assert required_truncation(13.0, 1.3844) == 10 + 5
    assert required_truncation(0.0, 1.0) == 5


def test_truncation_too_small():
    with pytest.raises(TruncationTooSmall) as info:
        build_floquet(0.0, 0.1, 13.0, 1.3844, 6)
    assert info.value.required == 15


def test_floquet_matrix_is_symmetric():
    fm = build_floquet(0.4, 0.3, 2.0, 1.0, 9)
    assert fm.size == 2 * (2 * 9 + 1)
    np.testing.assert_array_equal(fm.matrix, fm.matrix.T)


def test_undriven_quasienergies_fold_to_two_values():
    fm = build_floquet(0.3, 0.0, 0.0, 1.0, 6)
    q = quasienergies(fm)
    assert np.all(q >= -0.5) and np.all(q < 0.5)
    assert np.all(np.diff(q) >= 0)
    assert np.count_nonzero(np.isclose(q, 0.0, atol=1e-12)) == 13
    assert np.count_nonzero(np.isclose(q, -0.3, atol=1e-12)) == 13


def test_fold_is_idempotent():
    values = np.array([-3.7, -0.5, 0.49, 2.2, 11.0])
    once = fold_quasienergy(values, 1.3)
    np.testing.assert_allclose(fold_quasienergy(once, 1.3), once, atol=1e-12)


def test_resonance_gap_is_bessel_weighted():
    fm = build_floquet(1.0, 0.02, 1.5, 1.0, 12)
    values = np.linalg.eigvalsh(fm.matrix)
    gap = nearest_pair_gap(values, 0.0)
    assert gap == pytest.approx(0.02 * abs(bessel_j(1, 1.5)), rel=0.01)


def test_gap_closes_at_bessel_zero():
    omega = 0.002
    fm = build_floquet(0.0, omega, J0_FIRST_ZERO, 1.0, 12)
    gap = nearest_pair_gap(np.linalg.eigvalsh(fm.matrix), 0.0)
    assert gap < 1e-3 * omega


def test_interior_quasienergies_converge_in_truncation():
    near = []
    for trunc in (10, 15):
        values = np.linalg.eigvalsh(build_floquet(1.0, 0.2, 1.5, 1.0, trunc).matrix)
        near.append(np.sort(values[np.argsort(np.abs(values))[:2]]))
    np.testing.assert_allclose(near[0], near[1], atol=1e-8)


def dominant_frequency(t, y):
    y = y - y.mean()
    spectrum = np.abs(np.fft.rfft(y))
    freqs = np.fft.rfftfreq(len(y), t[1] - t[0])
    seed = freqs[int(np.argmax(spectrum[1:])) + 1]
    df = freqs[1]

    def misfit(f):
        basis = np.column_stack([np.ones_like(t), np.cos(2 * np.pi * f * t), np.sin(2 * np.pi * f * t)])
        coeffs = np.linalg.lstsq(basis, y, rcond=None)[0]
        return float(np.sum((basis @ coeffs - y) ** 2))

    return minimize_scalar(misfit, bounds=(seed - df, seed + df), method="bounded", options={"xatol": 1e-12}).x


@pytest.mark.parametrize("amp,delta", [(1.5, 1.0), (0.8, 0.0), (2.0, 2.0)])
def test_quasienergy_gap_matches_time_evolution(amp, delta):
    omega, omega_m = 0.2, 1.0
    gap = nearest_pair_gap(np.linalg.eigvalsh(build_floquet(delta, omega, amp, omega_m, 15).matrix), 0.0)

    # basis (|x⟩, |g⟩), closed system starting in |g⟩
    static = np.array([[-delta, omega / 2], [omega / 2, 0.0]], dtype=complex)
    modulation = np.array([[amp, 0.0], [0.0, 0.0]], dtype=complex)
    rho0 = np.diag([0.0, 1.0]).astype(complex)
    result = evolve(rho0, periodic_generator(static, modulation, omega_m), [], 10.0 / gap, 2e-3, store_every=5)
    measured = dominant_frequency(result.times, result.populations[:, 0])
    assert measured == pytest.approx(gap, rel=1e-4)


def test_sideband_heights_without_drive():
    sb = sideband_heights(0.0, 1.3844, 2.0, 4)
    assert sb.height(0) == pytest.approx(2.0 / 3.0)
    assert all(sb.height(n) == 0.0 for n in (-4, -1, 1, 4))
    assert sideband_count(sb) == 1


def test_sideband_heights_symmetric():
    sb = sideband_heights(5.0, 1.3844, 1.0, 12)
    np.testing.assert_allclose(sb.saturated_heights, sb.saturated_heights[::-1], atol=1e-15)


def test_strong_drive_reaches_ninth_order():
    sb = sideband_heights(13.0, 1.3844, 1.0, 20)
    assert sb.height(9) >= 0.1 * sb.saturated_heights.max()
    weak = sideband_heights(1.0, 1.3844, 1.0, 20)
    assert sideband_count(sb, min_frac=0.01) > sideband_count(weak, min_frac=0.01) == 3


def test_sideband_count_without_laser():
    assert sideband_count(sideband_heights(3.0, 1.0, 0.0, 8)) == 0


def test_general_floquet_matrix_hermitian():
    static = np.array([[0.4, 0.2, 0.05], [0.2, -0.4, 0.05], [0.05, 0.05, 0.0]], dtype=complex)
    modulation = np.diag([0.7, 0.3, 0.0]).astype(complex)
    modulation[0, 1] = modulation[1, 0] = 0.1
    hf = floquet_matrix(static, modulation, 1.6, 4, phase=0.7)
    np.testing.assert_allclose(hf, hf.conj().T, atol=1e-15)


def test_general_floquet_without_modulation_is_shifted_ladder():
    static = np.array([[1.0, 0.3], [0.3, -1.0]], dtype=complex)
    values, weights = floquet_spectrum(static, np.zeros((2, 2)), 1.6, 3)
    bare = np.linalg.eigvalsh(static)
    expected = np.sort(np.concatenate([bare + m * 1.6 for m in range(-3, 4)]))
    np.testing.assert_allclose(values, expected, atol=1e-12)
    assert weights.sum() == pytest.approx(2.0)
    assert np.count_nonzero(weights > 0.5) == 2


def test_central_weights_of_identity():
    weights = central_weights(np.eye(6), 2, 1)
    np.testing.assert_array_equal(weights, [0, 0, 1, 1, 0, 0])
