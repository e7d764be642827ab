"""
sweeps.py
---------

Dressed-state maps: PLE spectra stacked over a drive-amplitude ramp.

Every row of a map scales the whole drive (𝒜, ℰ1, ℰ2 together) so the
channel ratios stay fixed, as they do when the transducer power is ramped.
Rows are independent and run on a thread pool; each row is written back at
its own index so the map does not depend on completion order.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np
from tqdm import tqdm

from ..config import NvsimConfig
from ..physics.hamiltonians import Field
from ..physics.lindblad import InitialState, Model, ple_spectrum
from ..physics.params import DriveParams, FullLevelParams, OpticalParams, PulseSequence, StaticStrain

logger = logging.getLogger(__name__)


@dataclass
class SpectrumMap:
    """PL over (drive row) × (laser detuning)."""

    detunings: np.ndarray
    amplitudes: np.ndarray
    pl: np.ndarray
    scalings: Optional[np.ndarray] = None
    axis_label: str = "amp_a1_ghz"

    def __post_init__(self) -> None:
        self.detunings = np.asarray(self.detunings, dtype=float)
        self.amplitudes = np.asarray(self.amplitudes, dtype=float)
        self.pl = np.atleast_2d(np.asarray(self.pl, dtype=float))
        if self.scalings is None:
            self.scalings = np.ones(self.amplitudes.size)
        self.scalings = np.asarray(self.scalings, dtype=float)
        if self.pl.shape != (self.amplitudes.size, self.detunings.size):
            raise ValueError(
                f"map shape {self.pl.shape} does not match "
                f"{self.amplitudes.size} rows x {self.detunings.size} detunings"
            )

    @property
    def shape(self) -> tuple:
        return self.pl.shape

    def row(self, i: int) -> np.ndarray:
        return self.pl[i]

    def normalized(self) -> np.ndarray:
        """Each row divided by its own maximum (zero rows stay zero)."""
        peak = self.pl.max(axis=1, keepdims=True)
        return np.divide(self.pl, peak, out=np.zeros_like(self.pl), where=peak > 0)


def amplitude_from_power(power: Sequence[float] | float, calibration: float) -> np.ndarray:
    """Drive amplitude c·√P for a transducer power axis."""
    p = np.asarray(power, dtype=float)
    if np.any(p < 0):
        raise ValueError("transducer power must be >= 0")
    if calibration <= 0:
        raise ValueError("power calibration must be > 0")
    return calibration * np.sqrt(p)


def scalings_from_power(powers: Sequence[float], calibration: float, base_drive: DriveParams) -> np.ndarray:
    """Row scalings putting 𝒜 = c·√P on each row of a map."""
    if base_drive.amp_a1 == 0:
        raise ValueError("a power axis needs a nonzero base A1 amplitude")
    return amplitude_from_power(powers, calibration) / base_drive.amp_a1


def dressed_map(
    detunings: Sequence[float],
    amplitude_scalings: Sequence[float],
    base_drive: DriveParams,
    strain: StaticStrain,
    optics: OpticalParams,
    model: Model = "spin0",
    init: InitialState = "pure-ground",
    *,
    sequence: PulseSequence = PulseSequence(collect=200.0),
    levels: FullLevelParams = FullLevelParams(),
    field: Field = (0.0, 0.0),
    workers: Optional[int] = None,
    progress: bool = False,
    axis_label: str = "amp_a1_ghz",
) -> SpectrumMap:
    """Row i is the PLE spectrum under base_drive scaled by amplitude_scalings[i]."""
    dets = np.asarray(detunings, dtype=float)
    scalings = np.asarray(amplitude_scalings, dtype=float)
    if dets.size == 0 or scalings.size == 0:
        raise ValueError("dressed_map needs nonempty detuning and amplitude grids")
    if np.any(~np.isfinite(scalings)):
        raise ValueError("amplitude scalings must be finite")

    def run_row(scale: float) -> np.ndarray:
        return ple_spectrum(
            dets,
            strain,
            base_drive.scaled(scale),
            optics,
            sequence,
            model,
            init,
            levels=levels,
            field=field,
            workers=1,
        )

    n_workers = min(NvsimConfig.resolve_workers(workers), scalings.size)
    rows: List[Optional[np.ndarray]] = [None] * scalings.size
    if n_workers <= 1:
        for idx in tqdm(range(scalings.size), desc="Map rows", disable=not progress):
            rows[idx] = run_row(float(scalings[idx]))
    else:
        with ThreadPoolExecutor(n_workers) as pool:
            futures = {pool.submit(run_row, float(s)): idx for idx, s in enumerate(scalings)}
            for fut in tqdm(as_completed(futures), total=len(futures), desc="Map rows", disable=not progress):
                rows[futures[fut]] = fut.result()

    amplitudes = scalings * (base_drive.amp_a1 if base_drive.amp_a1 != 0 else base_drive.max_amplitude)
    logger.info(
        "Dressed map done: %d rows x %d detunings (max amplitude %.3g GHz)",
        scalings.size,
        dets.size,
        float(np.max(np.abs(amplitudes))) if amplitudes.size else math.nan,
    )
    return SpectrumMap(detunings=dets, amplitudes=amplitudes, pl=np.vstack(rows), scalings=scalings, axis_label=axis_label)
