"""
nvsim: phonon-dressed optical spectroscopy of NV centers

This package simulates resonant optical spectra of a diamond NV center
whose excited-state orbitals are driven by a gigahertz mechanical
resonator: Raman sidebands, multi-phonon orbital Rabi splitting, the full
spin-orbit manifold, orbital Rabi flopping, orbital dynamical decoupling
and resonator characterization.
"""

__version__ = "1.0.0"
__author__ = "nvsim developers"

from .config import NvsimConfig
from .errors import (
    ConfigError,
    DegenerateStrain,
    DimensionMismatch,
    EmptySpectrum,
    NotConverged,
    NumericalError,
    NvsimError,
    OutOfRange,
    StepTooLarge,
    TruncationTooSmall,
)

__all__ = [
    "__version__",
    "NvsimConfig",
    "NvsimError",
    "ConfigError",
    "NumericalError",
    "DegenerateStrain",
    "DimensionMismatch",
    "StepTooLarge",
    "OutOfRange",
    "TruncationTooSmall",
    "EmptySpectrum",
    "NotConverged",
]
