"""
cdd.py
------

Orbital continuous dynamical decoupling: how the dressed optical lines
move with a transverse electric field when the orbital doublet is driven
resonantly.

For each field value the field term εx·σz + εy·σx is added to the orbital
block and the two dressed lines closest to the undriven upper branch are
located, either from the Floquet spectrum of the 2×2 orbital Hamiltonian
(``method="floquet"``) or from simulated PLE peaks (``method="ple"``). The
slope dω/dε at ε = 0 is a central difference.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Literal, Optional, Sequence

import numpy as np

from ..physics.floquet import floquet_spectrum, required_truncation
from ..physics.hamiltonians import electric_shift
from ..physics.lindblad import ple_spectrum
from ..physics.params import DriveParams, OpticalParams, PulseSequence, StaticStrain
from .peaks import extract_peaks

logger = logging.getLogger(__name__)

Channel = Literal["x", "y"]
Method = Literal["floquet", "ple"]

_SIGMA_Z = np.diag([1.0, -1.0]).astype(complex)
_SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
MIN_CENTRAL_WEIGHT = 0.05


@dataclass
class CddResult:
    eps: np.ndarray
    lower: np.ndarray
    upper: np.ndarray
    slope_lower: float
    slope_upper: float
    undriven_slope: float
    channel: str
    method: str

    @property
    def slope(self) -> float:
        """Largest |dω/dε| of the two dressed lines at ε = 0."""
        return max(abs(self.slope_lower), abs(self.slope_upper))

    @property
    def suppression(self) -> float:
        return self.slope / self.undriven_slope if self.undriven_slope else math.nan


def bare_slope(strain: StaticStrain, channel: Channel) -> float:
    """|d(Δx)/dε| of the undriven branches at ε = 0."""
    if strain.delta_x == 0:
        return 1.0
    component = strain.v_e1 if channel == "x" else strain.v_e2
    return abs(component) / strain.delta_x


def _field(eps: float, channel: Channel) -> tuple[float, float]:
    if channel == "x":
        return eps, 0.0
    if channel == "y":
        return 0.0, eps
    raise ValueError(f"unknown field channel {channel!r}")


def _floquet_lines(
    eps: float,
    channel: Channel,
    strain: StaticStrain,
    drive: DriveParams,
    reference: float,
    trunc_n: int,
) -> tuple[float, float]:
    static = strain.v_e1 * _SIGMA_Z + strain.v_e2 * _SIGMA_X + electric_shift(*_field(eps, channel))
    modulation = drive.amp_a1 * np.eye(2) + drive.amp_e1 * _SIGMA_Z + drive.amp_e2 * _SIGMA_X
    values, weights = floquet_spectrum(static, modulation, drive.omega_m, trunc_n, drive.phase)
    # optically visible lines within half a zone of the bare upper branch
    visible = (np.abs(values - reference) < 0.5 * drive.omega_m) & (weights >= MIN_CENTRAL_WEIGHT)
    if not np.any(visible):
        logger.warning("No visible dressed line near %.3f GHz at eps=%.4g", reference, eps)
        return math.nan, math.nan
    lines = values[visible]
    return float(lines.min()), float(lines.max())


def _ple_lines(
    eps: float,
    channel: Channel,
    strain: StaticStrain,
    drive: DriveParams,
    optics: OpticalParams,
    reference: float,
    detunings: np.ndarray,
    sequence: PulseSequence,
    workers: Optional[int],
) -> tuple[float, float]:
    pl = ple_spectrum(detunings, strain, drive, optics, sequence, field=_field(eps, channel), workers=workers)
    peaks = sorted(extract_peaks(detunings, pl), key=lambda p: abs(p.position - reference))[:2]
    if not peaks:
        return math.nan, math.nan
    positions = sorted(p.position for p in peaks)
    return positions[0], positions[-1]


def _central_slope(eps: np.ndarray, values: np.ndarray) -> float:
    zero = int(np.argmin(np.abs(eps)))
    if abs(eps[zero]) > 1e-12 or zero == 0 or zero == eps.size - 1:
        raise ValueError("eps axis must contain 0 with a neighbour on each side")
    return float((values[zero + 1] - values[zero - 1]) / (eps[zero + 1] - eps[zero - 1]))


def cdd_dispersion(
    eps_axis: Sequence[float],
    which: Channel,
    strain: StaticStrain,
    drive: DriveParams,
    optics: OpticalParams,
    *,
    method: Method = "floquet",
    trunc_n: Optional[int] = None,
    detunings: Optional[Sequence[float]] = None,
    sequence: PulseSequence = PulseSequence(collect=200.0),
    workers: Optional[int] = None,
) -> CddResult:
    """Dressed transition frequencies vs transverse field and their slope at ε = 0."""
    eps = np.asarray(eps_axis, dtype=float)
    if eps.size < 3 or not np.allclose(np.sort(eps), -np.sort(eps)[::-1], atol=1e-12):
        raise ValueError("eps axis must span 0 symmetrically")
    reference = strain.delta_x
    n = trunc_n if trunc_n is not None else required_truncation(drive.max_amplitude + reference, drive.omega_m)

    if method == "floquet":
        lines = [_floquet_lines(float(e), which, strain, drive, reference, n) for e in eps]
    elif method == "ple":
        if detunings is None:
            half = 4.0 * optics.gamma + drive.max_amplitude + 0.5 * drive.omega_m
            detunings = np.linspace(reference - half, reference + half, 401)
        dets = np.asarray(detunings, dtype=float)
        lines = [
            _ple_lines(float(e), which, strain, drive, optics, reference, dets, sequence, workers) for e in eps
        ]
    else:
        raise ValueError(f"unknown method {method!r}")

    lower = np.array([lo for lo, _ in lines])
    upper = np.array([hi for _, hi in lines])
    result = CddResult(
        eps=eps,
        lower=lower,
        upper=upper,
        slope_lower=_central_slope(eps, lower),
        slope_upper=_central_slope(eps, upper),
        undriven_slope=bare_slope(strain, which),
        channel=which,
        method=method,
    )
    logger.info(
        "CDD (%s, eps_%s): |dw/de| = %.4g vs undriven %.4g",
        method,
        which,
        result.slope,
        result.undriven_slope,
    )
    return result
