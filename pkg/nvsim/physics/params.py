"""
Parameter value types shared by the physics modules.

Every frequency is an ordinary frequency in GHz (energy / h). The
integrators multiply by 2π internally and work in rad/ns.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Tuple

# Excited-state fine structure at low temperature (GHz)
LAMBDA_Z = 5.3
D_ES = 1.42
DELTA_PRIME = 1.55
LAMBDA_XY = 0.2
D_GS = 2.877

DEFAULT_OMEGA_M = 1.3844  # GHz, HBAR mode used for most spectra


@dataclass(frozen=True)
class StaticStrain:
    """Intrinsic deformation potentials of one NV center."""

    v_e1: float
    v_e2: float
    v_a1: float = 0.0

    def __post_init__(self) -> None:
        for name in ("v_a1", "v_e1", "v_e2"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")

    @property
    def delta_x(self) -> float:
        """Half splitting of the two orbital branches."""
        return math.hypot(self.v_e1, self.v_e2)


@dataclass(frozen=True)
class MixingAngle:
    theta: float

    def __post_init__(self) -> None:
        if not -math.pi / 4 - 1e-15 <= self.theta <= math.pi / 4 + 1e-15:
            raise ValueError(f"mixing angle {self.theta} outside [-pi/4, pi/4]")

    @property
    def sin2(self) -> float:
        return math.sin(2 * self.theta)

    @property
    def cos2(self) -> float:
        return math.cos(2 * self.theta)


@dataclass(frozen=True)
class StressCoupling:
    """Stress susceptibilities of the A1 and E channels (eV/Pa)."""

    a_coeff: float = 1.92e-12
    b_coeff: float = 1.36e-12

    def __post_init__(self) -> None:
        if self.a_coeff <= 0 or self.b_coeff <= 0:
            raise ValueError("stress coupling coefficients must be positive")


@dataclass(frozen=True)
class PolarizationCurve:
    angles: Tuple[float, ...]
    pl_x: Tuple[float, ...]
    pl_y: Tuple[float, ...]

    def __post_init__(self) -> None:
        if not len(self.angles) == len(self.pl_x) == len(self.pl_y):
            raise ValueError("polarization curve arrays differ in length")


@dataclass(frozen=True)
class OpticalParams:
    """Laser detuning, optical Rabi frequency and decay rate."""

    delta: float = 0.0
    omega: float = 0.0
    gamma: float = 0.1

    def __post_init__(self) -> None:
        if self.omega < 0:
            raise ValueError("optical Rabi frequency must be >= 0")
        if self.gamma <= 0:
            raise ValueError("optical decay rate must be > 0")

    @property
    def s0(self) -> float:
        """Saturation parameter 2Ω²/Γ²."""
        return 2.0 * self.omega**2 / self.gamma**2

    def with_delta(self, delta: float) -> "OpticalParams":
        return replace(self, delta=delta)


@dataclass(frozen=True)
class DriveParams:
    """Coherent phonon drive: A1, E1 and E2 amplitudes at omega_m."""

    amp_a1: float = 0.0
    amp_e1: float = 0.0
    omega_m: float = DEFAULT_OMEGA_M
    amp_e2: float = 0.0
    phase: float = 0.0

    def __post_init__(self) -> None:
        if not self.omega_m > 0:
            raise ValueError("mechanical frequency omega_m must be > 0")

    def scaled(self, factor: float) -> "DriveParams":
        """Same drive with every amplitude multiplied by factor."""
        return replace(
            self,
            amp_a1=self.amp_a1 * factor,
            amp_e1=self.amp_e1 * factor,
            amp_e2=self.amp_e2 * factor,
        )

    @property
    def max_amplitude(self) -> float:
        return max(abs(self.amp_a1), abs(self.amp_e1), abs(self.amp_e2))


@dataclass(frozen=True)
class FullLevelParams:
    """Spin-orbit and spin-spin constants of the 8-level model."""

    lambda_z: float = LAMBDA_Z
    d_es: float = D_ES
    delta_prime: float = DELTA_PRIME
    lambda_xy: float = LAMBDA_XY
    d_gs: float = D_GS
    v_parallel: float = 0.0
    omega_mw: float = 0.0


@dataclass(frozen=True)
class PulseSequence:
    """Ring-up and collection windows of one measurement cycle (ns)."""

    ring_up: float = 2000.0
    collect: float = 5000.0
    dt: float | None = None
    simulate_ring_up: bool = False

    def __post_init__(self) -> None:
        if self.ring_up <= 0 or self.collect <= 0:
            raise ValueError("ring_up and collect windows must be > 0")
        if self.dt is not None and self.dt <= 0:
            raise ValueError("dt must be > 0")
