"""
dressed_analytics.py
--------------------

Closed-form predictions of the phonon-dressed orbital doublet.

In the strain eigenbasis the E-channel drive splits into a diagonal part
ℰ1·cos2θ, which dresses each branch with a Bessel comb, and an off-diagonal
part ℰ1·sin2θ, which couples the branches. When (n+1)·ω_m matches the
static splitting 2Δx the two branches anticross; the functions here give
the size of that anticrossing per order and the combined splitting the
spectra show.

Usage
-----
    >>> p = polaron_params(StaticStrain(v_e1=1.529, v_e2=0.473),
    ...                    DriveParams(amp_e1=0.3, omega_m=1.6))
    >>> phonon_rabi(1, p)  # two-phonon coupling, GHz
"""

from __future__ import annotations

import logging
import math
import warnings
from dataclasses import dataclass, field
from typing import Dict, Literal

import numpy as np

from .floquet import bessel_j
from .params import DriveParams, MixingAngle, StaticStrain
from .strain_model import mixing_angle

logger = logging.getLogger(__name__)

Combine = Literal["root_sum", "quadrature"]
DEFAULT_MAX_ORDER = 8


@dataclass(frozen=True)
class PolaronParams:
    theta: MixingAngle
    delta_x: float
    amp_a1: float
    amp_e1: float
    omega_m: float

    def __post_init__(self) -> None:
        if self.delta_x < 0:
            raise ValueError("delta_x must be >= 0")
        if not self.omega_m > 0:
            raise ValueError("omega_m must be > 0")

    @property
    def modulation_index(self) -> float:
        """Argument 2ℰ1·cos2θ/ω_m of the Bessel couplings."""
        return 2.0 * self.amp_e1 * self.theta.cos2 / self.omega_m

    @property
    def valid(self) -> bool:
        """Regime of the displaced-oscillator picture: ω_m > ℰ1·sin2θ."""
        return self.omega_m > abs(self.amp_e1 * self.theta.sin2)


@dataclass
class SplittingBreakdown:
    per_order: Dict[int, float]
    total: float
    combine: Combine = "root_sum"
    dominant: int = field(init=False)

    def __post_init__(self) -> None:
        self.dominant = max(self.per_order, key=self.per_order.get) if self.per_order else 0

    def fraction(self, up_to: int) -> float:
        """Share of Σ S carried by the orders n+1 ≤ up_to."""
        total = sum(self.per_order.values())
        if total == 0:
            return 0.0
        return sum(v for k, v in self.per_order.items() if k <= up_to) / total


def polaron_params(strain: StaticStrain, drive: DriveParams) -> PolaronParams:
    """Displaced-basis parameters of one center under one drive."""
    p = PolaronParams(
        theta=mixing_angle(strain),
        delta_x=strain.delta_x,
        amp_a1=drive.amp_a1,
        amp_e1=drive.amp_e1,
        omega_m=drive.omega_m,
    )
    if not p.valid:
        message = (
            f"omega_m={p.omega_m:.4g} GHz is below E1*sin2theta={abs(p.amp_e1 * p.theta.sin2):.4g} GHz; "
            "multi-phonon couplings are outside their regime"
        )
        logger.warning(message)
        warnings.warn(message, RuntimeWarning, stacklevel=2)
    return p


def phonon_rabi(n: int, p: PolaronParams) -> float:
    """(n+1)-phonon orbital coupling ℰ1·sin2θ·J_n(2ℰ1·cos2θ/ω_m), signed."""
    if n < 0:
        raise ValueError("phonon order n must be >= 0")
    if p.amp_e1 == 0:
        return 0.0
    return p.amp_e1 * p.theta.sin2 * bessel_j(n, p.modulation_index)


def resonant_coupling(n: int, p: PolaronParams) -> float:
    """Rotating-wave off-diagonal element at (n+1)·ω_m = 2Δx.

    ½·ℰ1·sin2θ·[J_n(z) + J_{n+2}(z)] with z the modulation index. The
    populations of the two branches exchange with period 1/(2·|coupling|).
    """
    if n < 0:
        raise ValueError("phonon order n must be >= 0")
    if p.amp_e1 == 0:
        return 0.0
    z = p.modulation_index
    return 0.5 * p.amp_e1 * p.theta.sin2 * (bessel_j(n, z) + bessel_j(n + 2, z))


def splitting_contribution(n: int, p: PolaronParams) -> float:
    """Anticrossing S(n+1) seen in the spectrum from the (n+1)-phonon order.

    sqrt(d² + (2·phonon_rabi)²) − |d| with d = 2Δx − (n+1)·ω_m; the
    absolute value keeps S ≥ 0 for orders above the splitting.
    """
    detuning = 2.0 * p.delta_x - (n + 1) * p.omega_m
    coupling = 2.0 * phonon_rabi(n, p)
    return math.hypot(detuning, coupling) - abs(detuning)


def total_splitting(
    p: PolaronParams,
    max_order: int = DEFAULT_MAX_ORDER,
    combine: Combine = "root_sum",
) -> SplittingBreakdown:
    """Per-order contributions and their combination.

    ``root_sum`` is sqrt(Σ S), the empirical overlay used for the measured
    maps (heuristic, it mixes units). ``quadrature`` is sqrt(Σ S²).
    """
    if max_order < 1:
        raise ValueError("max_order must be >= 1")
    per_order = {k: splitting_contribution(k - 1, p) for k in range(1, max_order + 1)}
    values = np.fromiter(per_order.values(), dtype=float)
    if combine == "root_sum":
        total = float(np.sqrt(values.sum()))
    elif combine == "quadrature":
        total = float(np.sqrt(np.sum(values**2)))
    else:
        raise ValueError(f"unknown combination {combine!r}")
    return SplittingBreakdown(per_order=per_order, total=total, combine=combine)


def rwa_matrix(p: PolaronParams, t: float) -> np.ndarray:
    """Rotating-frame orbital Hamiltonian at time t (ns), counter-rotating terms dropped."""
    c = math.cos(2.0 * math.pi * p.omega_m * t)
    e1c = p.amp_e1 * p.theta.cos2
    return np.array(
        [
            [-p.omega_m + p.delta_x + (p.amp_a1 + e1c) * c, -p.amp_e1 * p.theta.sin2],
            [-p.amp_e1 * p.theta.sin2, -p.delta_x + (p.amp_a1 - e1c) * c],
        ],
        dtype=complex,
    )


def resonant_drive_frequency(delta_x: float, phonons: int = 1) -> float:
    """ω_m putting `phonons` quanta on the orbital splitting: 2Δx/phonons."""
    if phonons < 1:
        raise ValueError("phonons must be >= 1")
    return 2.0 * delta_x / phonons
