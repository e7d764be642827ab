"""
Peak positions of PLE spectra.

Strict local maxima above a fraction of the global maximum, refined by a
three-point parabola through the sample and its neighbours. Plateaus are
reported at their lowest detuning without refinement.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np
from scipy.signal import find_peaks

from ..errors import EmptySpectrum
from .sweeps import SpectrumMap

PeakList = List["Peak"]


@dataclass(frozen=True)
class Peak:
    position: float
    height: float
    refined: bool


def _parabolic(x: np.ndarray, y: np.ndarray, i: int) -> Optional[Peak]:
    y0, y1, y2 = y[i - 1], y[i], y[i + 1]
    curvature = y0 - 2.0 * y1 + y2
    if curvature >= 0:
        return None
    offset = 0.5 * (y0 - y2) / curvature  # in units of the local spacing, |offset| ≤ ½
    spacing = 0.5 * (x[i + 1] - x[i - 1])
    return Peak(
        position=float(x[i] + offset * spacing),
        height=float(y1 - 0.25 * (y0 - y2) * offset),
        refined=True,
    )


def extract_peaks(
    detunings: Sequence[float],
    pl: Sequence[float],
    min_height_frac: float = 0.05,
) -> PeakList:
    x = np.asarray(detunings, dtype=float)
    y = np.asarray(pl, dtype=float)
    if y.size < 3:
        raise EmptySpectrum(f"peak search needs at least 3 samples, got {y.size}")
    if x.shape != y.shape:
        raise ValueError(f"detuning axis {x.shape} and spectrum {y.shape} differ")

    top = float(y.max())
    if top <= 0:
        return []
    threshold = min_height_frac * top
    indices, props = find_peaks(y, height=threshold, plateau_size=1)

    peaks: PeakList = []
    for i, left, size in zip(indices, props["left_edges"], props["plateau_sizes"]):
        if y[i] <= threshold:
            continue
        if size > 1:
            peaks.append(Peak(position=float(x[left]), height=float(y[left]), refined=False))
            continue
        peaks.append(_parabolic(x, y, int(i)) or Peak(float(x[i]), float(y[i]), False))
    return peaks


def extract_map_peaks(smap: SpectrumMap, min_height_frac: float = 0.05) -> List[PeakList]:
    return [extract_peaks(smap.detunings, row, min_height_frac) for row in smap.pl]


def peaks_near(peaks: PeakList, center: float, window: float) -> PeakList:
    """Peaks within ±window of center, ordered by detuning."""
    return sorted((p for p in peaks if abs(p.position - center) <= window), key=lambda p: p.position)


def doublet_splitting(peaks: PeakList, center: float, window: float) -> float:
    """Distance between the two tallest peaks within ±window of center.

    Returns 0 when fewer than two peaks are found (unresolved doublet).
    """
    near = sorted(peaks_near(peaks, center, window), key=lambda p: p.height, reverse=True)[:2]
    if len(near) < 2:
        return 0.0
    return abs(near[0].position - near[1].position)
