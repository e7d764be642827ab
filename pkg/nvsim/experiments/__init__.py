"""
Experiment-level reproductions built on the physics layer.
"""

from .cdd import CddResult, bare_slope, cdd_dispersion
from .fitting import FitResult, fit_drive_params, simulate_map, with_noise
from .peaks import Peak, PeakList, doublet_splitting, extract_map_peaks, extract_peaks, peaks_near
from .rabi import OpticalPulse, flop_period, orbital_fraction, rabi_flopping
from .resonator import ResonatorModel, resonator_response, resonator_sideband_scan, ring_up_envelope
from .surrogate import sideband_spectrum
from .sweeps import SpectrumMap, amplitude_from_power, dressed_map, scalings_from_power

__all__ = [
    "CddResult",
    "FitResult",
    "OpticalPulse",
    "Peak",
    "PeakList",
    "ResonatorModel",
    "SpectrumMap",
    "amplitude_from_power",
    "bare_slope",
    "cdd_dispersion",
    "doublet_splitting",
    "dressed_map",
    "extract_map_peaks",
    "extract_peaks",
    "fit_drive_params",
    "flop_period",
    "orbital_fraction",
    "peaks_near",
    "rabi_flopping",
    "resonator_response",
    "resonator_sideband_scan",
    "ring_up_envelope",
    "scalings_from_power",
    "sideband_spectrum",
    "simulate_map",
    "with_noise",
]
