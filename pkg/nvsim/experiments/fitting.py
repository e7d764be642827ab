"""
fitting.py
----------

Recover the drive amplitudes (𝒜, ℰ1) from a dressed-state map.

Simulated and target rows are both normalised to unit peak so the fit is
insensitive to collection efficiency; the objective is the summed squared
difference. Minimisation is a bounded Nelder–Mead simplex with the standard
reflection/expansion/contraction/shrink coefficients (1, 2, ½, ½), stopped
when the simplex is smaller than ``xatol`` GHz in every direction.

The forward model is either the full master-equation map (``"lindblad"``)
or the closed-form sideband surrogate (``"sidebands"``).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from typing import Any, Dict, List, Literal, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import minimize

from ..errors import NotConverged
from ..physics.params import DriveParams, OpticalParams, StaticStrain
from .surrogate import sideband_spectrum
from .sweeps import SpectrumMap, dressed_map

logger = logging.getLogger(__name__)

FitModel = Literal["lindblad", "sidebands"]
Bounds = Sequence[Tuple[Optional[float], Optional[float]]]

DEFAULT_XATOL = 1e-3  # GHz
DEFAULT_MAX_ITER = 500
EXACT_TOLERANCE = 1e-20


@dataclass
class FitResult:
    amp_a1: float
    amp_e1: float
    residual: float
    iterations: int
    converged: bool
    evaluations: int = 0
    history: List[float] = field(default_factory=list)
    model: str = "lindblad"
    message: str = ""

    @property
    def ratio(self) -> float:
        """ℰ1/𝒜 of the fitted drive."""
        return self.amp_e1 / self.amp_a1 if self.amp_a1 else float("nan")

    def drive(self, base: DriveParams) -> DriveParams:
        return replace(base, amp_a1=self.amp_a1, amp_e1=self.amp_e1)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "amp_a1": self.amp_a1,
            "amp_e1": self.amp_e1,
            "ratio": self.ratio,
            "residual": self.residual,
            "iterations": self.iterations,
            "evaluations": self.evaluations,
            "converged": self.converged,
            "model": self.model,
            "message": self.message,
        }


def simulate_map(
    target: SpectrumMap,
    drive: DriveParams,
    strain: StaticStrain,
    optics: OpticalParams,
    model: FitModel = "lindblad",
    **simulation: Any,
) -> SpectrumMap:
    """Forward model on the target's detuning axis and row scalings."""
    if model == "sidebands":
        rows = [sideband_spectrum(target.detunings, strain, drive.scaled(s), optics) for s in target.scalings]
        return SpectrumMap(
            detunings=target.detunings,
            amplitudes=target.scalings * drive.amp_a1,
            pl=np.vstack(rows),
            scalings=target.scalings,
        )
    if model == "lindblad":
        return dressed_map(target.detunings, target.scalings, drive, strain, optics, **simulation)
    raise ValueError(f"unknown fit model {model!r}")


def with_noise(target: SpectrumMap, level: float, seed: Optional[int] = None) -> SpectrumMap:
    """Copy of a map with Gaussian noise of level × row maximum added."""
    if level < 0:
        raise ValueError("noise level must be >= 0")
    rng = np.random.default_rng(seed)
    scale = target.pl.max(axis=1, keepdims=True)
    noisy = target.pl + level * scale * rng.standard_normal(target.pl.shape)
    return replace(target, pl=noisy)


def fit_drive_params(
    target: SpectrumMap,
    initial: DriveParams,
    strain: StaticStrain,
    optics: OpticalParams,
    bounds: Optional[Bounds] = None,
    *,
    model: FitModel = "lindblad",
    xatol: float = DEFAULT_XATOL,
    max_iter: int = DEFAULT_MAX_ITER,
    strict: bool = False,
    **simulation: Any,
) -> FitResult:
    """Nelder–Mead fit of (𝒜, ℰ1); other drive fields are taken from ``initial``.

    Raises NotConverged (carrying the best-so-far FitResult) only when
    ``strict`` is set; otherwise the result has converged=False.
    """
    reference = target.normalized()
    evaluations = 0

    def objective(x: np.ndarray) -> float:
        nonlocal evaluations
        evaluations += 1
        drive = replace(initial, amp_a1=float(x[0]), amp_e1=float(x[1]))
        simulated = simulate_map(target, drive, strain, optics, model, **simulation).normalized()
        return float(np.sum((simulated - reference) ** 2))

    x0 = np.array([initial.amp_a1, initial.amp_e1], dtype=float)
    f0 = objective(x0)
    if f0 <= EXACT_TOLERANCE:
        logger.info("Initial drive already reproduces the target (residual %.2e)", f0)
        return FitResult(
            amp_a1=float(x0[0]),
            amp_e1=float(x0[1]),
            residual=f0,
            iterations=0,
            converged=True,
            evaluations=evaluations,
            history=[f0],
            model=model,
            message="initial point is exact",
        )

    history: List[float] = [f0]

    def track(intermediate_result) -> None:
        history.append(float(intermediate_result.fun))

    res = minimize(
        objective,
        x0,
        method="Nelder-Mead",
        bounds=bounds,
        callback=track,
        options={
            "xatol": xatol,
            "fatol": np.inf,
            "maxiter": max_iter,
            "maxfev": max_iter,
            "adaptive": False,
        },
    )
    result = FitResult(
        amp_a1=float(res.x[0]),
        amp_e1=float(res.x[1]),
        residual=float(res.fun),
        iterations=int(res.nit),
        converged=bool(res.success),
        evaluations=evaluations,
        history=history,
        model=model,
        message=str(res.message),
    )
    logger.info(
        "Fit %s: A=%.5f E1=%.5f GHz residual=%.3e after %d iterations / %d evaluations",
        "converged" if result.converged else "stopped",
        result.amp_a1,
        result.amp_e1,
        result.residual,
        result.iterations,
        result.evaluations,
    )
    if not result.converged:
        if strict:
            raise NotConverged(f"drive fit did not converge: {result.message}", result=result)
        logger.warning("Drive fit did not converge: %s", result.message)
    return result
