"""
Acoustic resonator comb: mode response, ring-up and the sideband count
seen when the drive frequency is scanned through the modes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

from ..physics.floquet import required_truncation, sideband_count, sideband_heights


@dataclass(frozen=True)
class ResonatorModel:
    f_lo: float = 1.0
    f_hi: float = 1.6
    fsr: float = 0.0167
    q: float = 1500.0

    def __post_init__(self) -> None:
        if not self.f_lo < self.f_hi:
            raise ValueError("resonator band needs f_lo < f_hi")
        if self.fsr <= 0 or self.q <= 0:
            raise ValueError("fsr and q must be > 0")

    @property
    def modes(self) -> np.ndarray:
        count = int(math.floor((self.f_hi - self.f_lo) / self.fsr + 1e-9)) + 1
        return self.f_lo + self.fsr * np.arange(count)

    def nearest_mode(self, frequency: float) -> float:
        modes = self.modes
        return float(modes[np.argmin(np.abs(modes - frequency))])


def _comb(frequency: np.ndarray, model: ResonatorModel) -> np.ndarray:
    modes = model.modes
    half_width = 0.5 * modes / model.q
    diff = np.asarray(frequency, dtype=float)[..., None] - modes
    return np.sum(half_width**2 / (diff**2 + half_width**2), axis=-1)


def resonator_response(omega_drive: float | Sequence[float], model: ResonatorModel = ResonatorModel()):
    """Lorentzian comb normalised to 1 at the nearest mode centre."""
    f = np.asarray(omega_drive, dtype=float)
    if np.any(f <= 0):
        raise ValueError("drive frequency must be > 0")
    modes = model.modes
    nearest = modes[np.argmin(np.abs(f[..., None] - modes), axis=-1)]
    response = np.clip(_comb(f, model) / _comb(nearest, model), 0.0, 1.0)
    return float(response) if response.ndim == 0 else response


def ring_up_envelope(t: float | Sequence[float], frequency: float, q: float):
    """Amplitude reached t ns after the drive is switched on: 1 − exp(−π f t / Q)."""
    value = 1.0 - np.exp(-math.pi * frequency * np.asarray(t, dtype=float) / q)
    return float(value) if np.ndim(value) == 0 else value


def resonator_sideband_scan(
    freqs: Sequence[float],
    base_amp: float,
    model: ResonatorModel = ResonatorModel(),
    s0: float = 1.0,
    min_frac: float = 0.1,
) -> Tuple[np.ndarray, np.ndarray]:
    """(response, observable sideband count) at each drive frequency."""
    f = np.asarray(freqs, dtype=float)
    response = np.atleast_1d(resonator_response(f, model))
    order = required_truncation(base_amp, float(f.min())) + 5
    counts = np.array(
        [
            sideband_count(sideband_heights(base_amp * r, fi, s0, order), min_frac)
            for fi, r in zip(f, response)
        ]
    )
    return response, counts
