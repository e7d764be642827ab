"""
strain_model.py
---------------

Static strain of a single NV center and the conversion from resonator
stress to drive amplitudes.

The orbital pair (|x⟩, |y⟩) feels the Jahn-Teller strain Hamiltonian
V_A1 + V_E1·σz + V_E2·σx. Its eigenbasis is rotated by the mixing angle
θ (tan 2θ = V_E2 / V_E1) and split by 2Δx = 2·sqrt(V_E1² + V_E2²).

Usage
-----
    >>> strain = StaticStrain(v_e1=5.3, v_e2=0.0)
    >>> static_splitting(strain)
    10.6
    >>> mixing_angle(StaticStrain(v_e1=1.0, v_e2=1.0)).theta
    0.39269908169872414
"""

from __future__ import annotations

import logging
import math
from typing import Sequence

import numpy as np
from scipy.optimize import minimize_scalar

from ..errors import DegenerateStrain
from .params import (
    DEFAULT_OMEGA_M,
    DriveParams,
    MixingAngle,
    PolarizationCurve,
    StaticStrain,
    StressCoupling,
)

logger = logging.getLogger(__name__)

PLANCK_EV_S = 4.135667696e-15
HZ_PER_GHZ = 1e9


def mixing_angle(strain: StaticStrain) -> MixingAngle:
    """½·atan2(V_E2, V_E1) folded into [−π/4, π/4]."""
    if strain.v_e1 == 0 and strain.v_e2 == 0:
        raise DegenerateStrain("mixing angle undefined for V_E1 = V_E2 = 0")
    theta = 0.5 * math.atan2(strain.v_e2, strain.v_e1)
    if theta > math.pi / 4:
        theta -= math.pi / 2
    elif theta < -math.pi / 4:
        theta += math.pi / 2
    return MixingAngle(theta)


def static_splitting(strain: StaticStrain) -> float:
    """Full splitting 2Δx of the orbital branches (GHz)."""
    return 2.0 * strain.delta_x


def strain_from_splitting(splitting: float, theta: float) -> StaticStrain:
    """Deformation potentials from a measured splitting and dipole rotation."""
    half = 0.5 * splitting
    return StaticStrain(v_e1=half * math.cos(2 * theta), v_e2=half * math.sin(2 * theta))


def ideal_drive_ratio(coupling: StressCoupling = StressCoupling()) -> float:
    """ℰ1/𝒜 expected for stress perfectly aligned with [001]."""
    return 2.0 * coupling.b_coeff / coupling.a_coeff


def stress_to_drive(
    sigma0: float,
    coupling: StressCoupling = StressCoupling(),
    off_axis: float = 0.0,
    *,
    omega_m: float = DEFAULT_OMEGA_M,
    phase: float = 0.0,
) -> DriveParams:
    """Drive amplitudes produced by a uniaxial [001] stress amplitude.

    off_axis is the asymmetry (σ_XX − σ_YY)/σ_ZZ feeding the E2 channel.
    """
    if sigma0 < 0:
        raise ValueError("stress amplitude must be >= 0")
    to_ghz = 1.0 / (PLANCK_EV_S * HZ_PER_GHZ)
    return DriveParams(
        amp_a1=coupling.a_coeff * sigma0 * to_ghz,
        amp_e1=2.0 * coupling.b_coeff * sigma0 * to_ghz,
        amp_e2=math.sqrt(3.0) * coupling.b_coeff * off_axis * sigma0 * to_ghz,
        omega_m=omega_m,
        phase=phase,
    )


def _saturated(u: np.ndarray, s0: float) -> np.ndarray:
    # S(u) = u / (1 + u), peak-normalised; s0 → 0 is plain Malus law
    if s0 == 0:
        return u
    return (s0 * u / (1.0 + s0 * u)) / (s0 / (1.0 + s0))


def polarization_curve(
    theta: MixingAngle | float,
    phi0: float,
    s0: float,
    angles: Sequence[float],
) -> PolarizationCurve:
    """Saturated PL of the two orthogonal dipoles vs laser polarization."""
    if s0 < 0:
        raise ValueError("saturation parameter must be >= 0")
    th = theta.theta if isinstance(theta, MixingAngle) else float(theta)
    phi = np.asarray(angles, dtype=float)
    pl_x = _saturated(np.cos(phi - phi0 - th) ** 2, s0)
    pl_y = _saturated(np.cos(phi - phi0 - th - math.pi / 2) ** 2, s0)
    return PolarizationCurve(
        angles=tuple(phi.tolist()),
        pl_x=tuple(np.clip(pl_x, 0.0, 1.0).tolist()),
        pl_y=tuple(np.clip(pl_y, 0.0, 1.0).tolist()),
    )


def extract_mixing_angle(curve: PolarizationCurve, phi0: float, s0: float) -> MixingAngle:
    """Least-squares mixing angle reproducing a measured polarization curve."""
    target_x = np.asarray(curve.pl_x)
    target_y = np.asarray(curve.pl_y)

    def objective(th: float) -> float:
        model = polarization_curve(th, phi0, s0, curve.angles)
        return float(
            np.sum((np.asarray(model.pl_x) - target_x) ** 2)
            + np.sum((np.asarray(model.pl_y) - target_y) ** 2)
        )

    # coarse scan first: the objective is periodic in θ with period π/2
    grid = np.linspace(-math.pi / 4, math.pi / 4, 91)
    best = grid[int(np.argmin([objective(g) for g in grid]))]
    step = grid[1] - grid[0]
    lo = max(-math.pi / 4, best - step)
    hi = min(math.pi / 4, best + step)
    res = minimize_scalar(objective, bounds=(lo, hi), method="bounded", options={"xatol": 1e-10})
    logger.debug("Polarization fit: theta=%.6f residual=%.3e", res.x, res.fun)
    return MixingAngle(float(min(max(res.x, -math.pi / 4), math.pi / 4)))
