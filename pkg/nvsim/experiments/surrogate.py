"""
Closed-form PLE line shape built from saturated Bessel sideband heights.

Each strain branch b contributes Lorentzians centred at E_b + n·ω_m with
height s_b·J_n²/(1 + s_b·J_n²) and half width (Γ/2)·sqrt(1 + s_b·J_n²),
where the modulation index is the branch's own diagonal drive amplitude
divided by ω_m. Cheap enough to sit inside a fit loop.
"""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from ..physics.floquet import required_truncation, sideband_heights
from ..physics.hamiltonians import effective_drive
from ..physics.params import DriveParams, OpticalParams, StaticStrain
from ..physics.strain_model import mixing_angle


def branch_lines(strain: StaticStrain, drive: DriveParams, optics: OpticalParams):
    """(energy, diagonal amplitude, optical Rabi) of the x′ and y′ branches."""
    theta = mixing_angle(strain).theta if strain.delta_x > 0 else 0.0
    c2, s2 = math.cos(2 * theta), math.sin(2 * theta)
    energy = strain.v_e1 * c2 + strain.v_e2 * s2
    diagonal, _ = effective_drive(theta, drive)
    c, s = math.cos(theta), math.sin(theta)
    return (
        (energy, drive.amp_a1 + diagonal, optics.omega * abs(c + s)),
        (-energy, drive.amp_a1 - diagonal, optics.omega * abs(c - s)),
    )


def sideband_spectrum(
    detunings: Sequence[float],
    strain: StaticStrain,
    drive: DriveParams,
    optics: OpticalParams,
    max_order: int | None = None,
) -> np.ndarray:
    dets = np.asarray(detunings, dtype=float)
    out = np.zeros_like(dets)
    for energy, amp, rabi in branch_lines(strain, drive, optics):
        s0 = 2.0 * rabi**2 / optics.gamma**2
        order = max_order if max_order is not None else required_truncation(amp, drive.omega_m) + 5
        sb = sideband_heights(amp, drive.omega_m, s0, order)
        widths = 0.5 * optics.gamma * np.sqrt(1.0 + s0 * sb.weights)
        centres = energy + sb.orders * drive.omega_m
        diff = dets[:, None] - centres[None, :]
        out += np.sum(sb.saturated_heights * widths**2 / (diff**2 + widths**2), axis=1)
    return out
