"""
rabi.py
-------

Phonon-driven orbital Rabi flopping.

A resonant optical pulse first puts the center into the x′ strain branch
(laser polarised along the x′ dipole, mechanical drive idle). The laser is
then switched off and the mechanical drive, tuned so that (n+1)·ω_m
matches 2Δx, swaps population between the x′ and y′ branches. Populations
are reported in the strain eigenbasis (x′, y′, g).
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np
from scipy.optimize import minimize_scalar

from ..physics.dressed_analytics import PolaronParams
from ..physics.hamiltonians import X, Y, rotated_spin0_parts
from ..physics.lindblad import (
    EvolutionResult,
    decay_channels,
    evolve,
    ground_state,
    max_stable_step,
    periodic_generator,
)
from ..physics.params import DriveParams, OpticalParams, StaticStrain
from ..physics.strain_model import strain_from_splitting

logger = logging.getLogger(__name__)

MIN_ORBITAL_POPULATION = 1e-9


@dataclass(frozen=True)
class OpticalPulse:
    """Resonant excitation of one strain branch before the flopping window."""

    duration: Optional[float] = None  # ns; None means 1/(2Ω)
    branch: str = "x"
    drive_during_pulse: bool = False

    def length(self, omega: float) -> float:
        if self.duration is not None:
            return self.duration
        if omega <= 0:
            raise ValueError("an optical pulse needs a nonzero Rabi frequency")
        return 1.0 / (2.0 * omega)


def _setup(p: PolaronParams) -> tuple[StaticStrain, DriveParams]:
    strain = strain_from_splitting(2.0 * p.delta_x, p.theta.theta)
    drive = DriveParams(amp_a1=p.amp_a1, amp_e1=p.amp_e1, omega_m=p.omega_m)
    return strain, drive


def rabi_flopping(
    p: PolaronParams,
    optics: OpticalParams,
    pulse: OpticalPulse = OpticalPulse(),
    t_span: float = 20.0,
    *,
    dt: Optional[float] = None,
    store_every: int = 1,
) -> EvolutionResult:
    """Optical pulse then t_span ns of laser-off mechanical driving.

    The returned times start at 0 (start of the pulse); the flopping
    window begins at ``pulse.length(optics.omega)``.
    """
    strain, drive = _setup(p)
    bright = pulse.branch
    c2, s2 = p.theta.cos2, p.theta.sin2
    energy = strain.v_e1 * c2 + strain.v_e2 * s2
    resonance = energy if bright == "x" else -energy
    laser = optics.with_delta(resonance)
    dark = replace(laser, omega=0.0)

    step = dt if dt is not None else max_stable_step(strain, drive, laser, [resonance])
    channels = decay_channels("spin0", optics.gamma)
    t_pulse = pulse.length(optics.omega)

    pulse_drive = drive if pulse.drive_during_pulse else drive.scaled(0.0)
    static, modulation = rotated_spin0_parts(strain, pulse_drive, laser, dipole=bright)
    first = evolve(
        ground_state("spin0"),
        periodic_generator(static, modulation, drive.omega_m, drive.phase),
        channels,
        (0.0, t_pulse),
        step,
        store_every=store_every,
    )

    static, modulation = rotated_spin0_parts(strain, drive, dark, dipole=bright)
    second = evolve(
        first.rho,
        periodic_generator(static, modulation, drive.omega_m, drive.phase),
        channels,
        (t_pulse, t_pulse + t_span),
        step,
        store_every=store_every,
    )
    logger.debug(
        "Rabi flopping: pulse %.3f ns, window %.1f ns, excited population after pulse %.4f",
        t_pulse,
        t_span,
        float(first.populations[-1][X] + first.populations[-1][Y]),
    )
    return EvolutionResult(
        times=np.concatenate([first.times, second.times[1:]]),
        populations=np.concatenate([first.populations, second.populations[1:]]),
        pl=float(first.pl) + float(second.pl),
        rho=second.rho,
    )


def orbital_fraction(result: EvolutionResult) -> np.ndarray:
    """y′ share of the excited population, ρ_y′y′ / (ρ_x′x′ + ρ_y′y′)."""
    px = result.populations[:, X]
    py = result.populations[:, Y]
    total = px + py
    return np.divide(py, total, out=np.zeros_like(py), where=total > MIN_ORBITAL_POPULATION)


def flop_period(result: EvolutionResult, t_start: float = 0.0) -> float:
    """Period (ns) of the x′ ↔ y′ exchange after t_start.

    A sinusoid a + b·cos(2πt/T) + c·sin(2πt/T) is fitted by linear least
    squares for each trial period; the FFT peak seeds a bounded search.
    Returns inf when the fraction does not oscillate.
    """
    mask = result.times >= t_start - 1e-12
    t = result.times[mask] - t_start
    frac = orbital_fraction(result)[mask]
    if t.size < 8:
        raise ValueError("too few samples to measure a flop period")
    if np.ptp(frac) < 1e-6:
        return math.inf

    spacing = float(np.median(np.diff(t)))
    centred = frac - frac.mean()
    spectrum = np.abs(np.fft.rfft(centred))
    freqs = np.fft.rfftfreq(t.size, spacing)
    k = int(np.argmax(spectrum[1:])) + 1
    guess, width = freqs[k], freqs[1]

    def misfit(f: float) -> float:
        phase = 2.0 * math.pi * f * t
        design = np.column_stack([np.ones_like(t), np.cos(phase), np.sin(phase)])
        _, residual, *_ = np.linalg.lstsq(design, frac, rcond=None)
        return float(residual[0]) if residual.size else 0.0

    lo = max(guess - width, 0.25 * width)
    res = minimize_scalar(misfit, bounds=(lo, guess + width), method="bounded", options={"xatol": 1e-9})
    return 1.0 / float(res.x)
