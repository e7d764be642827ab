"""
Physics layer: strain geometry, level-system generators, the master
equation integrator, the Floquet sideband picture and the closed-form
dressed-state predictions.
"""

from .dressed_analytics import (
    PolaronParams,
    SplittingBreakdown,
    phonon_rabi,
    polaron_params,
    resonant_coupling,
    resonant_drive_frequency,
    rwa_matrix,
    splitting_contribution,
    total_splitting,
)
from .floquet import (
    FloquetMatrix,
    SidebandWeights,
    bessel_j,
    bessel_j_orders,
    build_floquet,
    central_weights,
    floquet_matrix,
    floquet_spectrum,
    quasienergies,
    sideband_count,
    sideband_heights,
)
from .hamiltonians import (
    build_full8,
    build_rotated_spin0,
    build_spin0,
    effective_drive,
    electric_shift,
    full8_parts,
    rotation_matrix,
    spin0_parts,
)
from .lindblad import (
    EvolutionResult,
    check_density_matrix,
    decay_channels,
    evolve,
    ground_state,
    lindblad_rhs,
    max_stable_step,
    mixed_spin_state,
    periodic_generator,
    ple_spectrum,
)
from .params import (
    DriveParams,
    FullLevelParams,
    MixingAngle,
    OpticalParams,
    PolarizationCurve,
    PulseSequence,
    StaticStrain,
    StressCoupling,
)
from .strain_model import (
    extract_mixing_angle,
    ideal_drive_ratio,
    mixing_angle,
    polarization_curve,
    static_splitting,
    strain_from_splitting,
    stress_to_drive,
)

__all__ = [
    "DriveParams",
    "EvolutionResult",
    "FloquetMatrix",
    "FullLevelParams",
    "MixingAngle",
    "OpticalParams",
    "PolarizationCurve",
    "PolaronParams",
    "PulseSequence",
    "SidebandWeights",
    "SplittingBreakdown",
    "StaticStrain",
    "StressCoupling",
    "bessel_j",
    "bessel_j_orders",
    "build_floquet",
    "build_full8",
    "build_rotated_spin0",
    "build_spin0",
    "central_weights",
    "check_density_matrix",
    "decay_channels",
    "effective_drive",
    "electric_shift",
    "evolve",
    "extract_mixing_angle",
    "floquet_matrix",
    "floquet_spectrum",
    "full8_parts",
    "ground_state",
    "ideal_drive_ratio",
    "lindblad_rhs",
    "max_stable_step",
    "mixed_spin_state",
    "mixing_angle",
    "periodic_generator",
    "phonon_rabi",
    "ple_spectrum",
    "polarization_curve",
    "polaron_params",
    "quasienergies",
    "resonant_coupling",
    "resonant_drive_frequency",
    "rotation_matrix",
    "rwa_matrix",
    "sideband_count",
    "sideband_heights",
    "spin0_parts",
    "splitting_contribution",
    "static_splitting",
    "strain_from_splitting",
    "stress_to_drive",
    "total_splitting",
]
