"""
Exception hierarchy for nvsim.

Library code raises these; only the command line front end turns them
into exit codes (config → 2, numerical → 3, not converged → 4).
"""

from __future__ import annotations

from typing import Any, Optional


class NvsimError(Exception):
    """Base class for every error raised by nvsim."""


class ConfigError(NvsimError):
    """A run configuration is malformed or references an unknown key."""

    def __init__(self, message: str, key: Optional[str] = None) -> None:
        super().__init__(message)
        self.key = key


class NumericalError(NvsimError):
    """A computation could not produce a trustworthy result."""


class DegenerateStrain(NumericalError):
    """Mixing angle requested for zero transverse strain."""


class DimensionMismatch(NumericalError):
    """Operands of different Hilbert-space dimension were combined."""


class StepTooLarge(NumericalError):
    """Integrator drifted off the unit-trace manifold."""

    def __init__(self, message: str, dt: float, trace_error: float) -> None:
        super().__init__(message)
        self.dt = dt
        self.trace_error = trace_error


class OutOfRange(NumericalError):
    """Argument outside the supported domain of a special function."""


class TruncationTooSmall(NumericalError):
    """Floquet truncation cannot hold the sidebands of the drive."""

    def __init__(self, message: str, required: int) -> None:
        super().__init__(message)
        self.required = required


class EmptySpectrum(NumericalError):
    """Peak search on fewer samples than a local maximum needs."""


class NotConverged(NvsimError):
    """Fit stopped before the simplex shrank below tolerance."""

    def __init__(self, message: str, result: Any = None) -> None:
        super().__init__(message)
        self.result = result
