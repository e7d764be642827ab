"""
hamiltonians.py
---------------

Time-dependent Hermitian generators of the driven NV center, in GHz.

Two models are provided:

* spin-0 (3 levels), basis order (|x⟩, |y⟩, |g⟩): the E_x/E_y orbital
  pair coupled to the m_s = 0 ground state by the laser, in the laser
  rotating frame.
* full (8 levels), basis order (|A1⟩, |A2⟩, |Ex⟩, |Ey⟩, |E1⟩, |E2⟩,
  |g,|m_s|=1⟩, |g,m_s=0⟩): the whole excited-state spin-orbit manifold.

Every generator is H(t) = static + modulation·cos(2π·ω_m·t + phase);
the ``*_parts`` functions return the two matrices and the ``build_*``
functions evaluate them at one time t (ns).
"""

from __future__ import annotations

import math
from typing import Literal, Tuple

import numpy as np

from .params import DriveParams, FullLevelParams, OpticalParams, StaticStrain
from .strain_model import mixing_angle

# A dim×dim complex ndarray, Hermitian at every t
HermitianGenerator = np.ndarray

# spin-0 basis
X, Y, G = 0, 1, 2
SPIN0_EXCITED = (X, Y)

# 8-level basis
A1, A2, EX, EY, E1, E2, G1, G0 = range(8)
FULL8_EXCITED = (A1, A2, EX, EY, E1, E2)
FULL8_LABELS = ("A1", "A2", "Ex", "Ey", "E1", "E2", "g1", "g0")

Field = Tuple[float, float]
Dipole = Literal["both", "x", "y"]

_SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
_SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)


def drive_phase(t: float, drive: DriveParams) -> float:
    """cos(2π·ω_m·t + phase)."""
    return math.cos(2.0 * math.pi * drive.omega_m * t + drive.phase)


def hermitize(h: np.ndarray) -> np.ndarray:
    return 0.5 * (h + np.conj(np.swapaxes(h, -1, -2)))


def electric_shift(eps_x: float, eps_y: float) -> HermitianGenerator:
    """Transverse field addend on the (Ex, Ey) block: εx·σz + εy·σx."""
    return eps_x * _SIGMA_Z + eps_y * _SIGMA_X


def spin0_parts(
    strain: StaticStrain,
    drive: DriveParams,
    optics: OpticalParams,
    field: Field = (0.0, 0.0),
) -> Tuple[np.ndarray, np.ndarray]:
    static = np.zeros((3, 3), dtype=complex)
    static[X, X] = -optics.delta + strain.v_e1
    static[Y, Y] = -optics.delta - strain.v_e1
    static[X, Y] = static[Y, X] = strain.v_e2
    static[G, X] = static[X, G] = optics.omega / 2
    static[G, Y] = static[Y, G] = optics.omega / 2
    static[:2, :2] += electric_shift(*field)

    modulation = np.zeros((3, 3), dtype=complex)
    modulation[X, X] = drive.amp_a1 + drive.amp_e1
    modulation[Y, Y] = drive.amp_a1 - drive.amp_e1
    modulation[X, Y] = modulation[Y, X] = drive.amp_e2
    return static, modulation


def build_spin0(
    t: float,
    strain: StaticStrain,
    drive: DriveParams,
    optics: OpticalParams,
    field: Field = (0.0, 0.0),
) -> HermitianGenerator:
    static, modulation = spin0_parts(strain, drive, optics, field)
    return static + modulation * drive_phase(t, drive)


def full8_parts(
    strain: StaticStrain,
    drive: DriveParams,
    optics: OpticalParams,
    levels: FullLevelParams = FullLevelParams(),
    field: Field = (0.0, 0.0),
) -> Tuple[np.ndarray, np.ndarray]:
    lz, d, dp = levels.lambda_z, levels.d_es, levels.delta_prime
    v1, v2 = strain.v_e1, strain.v_e2
    half_omega = optics.omega / 2

    static = np.zeros((8, 8), dtype=complex)
    static[A1, A1] = lz + d / 3 - dp
    static[A2, A2] = lz + d / 3 + dp
    static[EX, EX] = -2 * d / 3 + v1
    static[EY, EY] = -2 * d / 3 - v1
    static[E1, E1] = static[E2, E2] = -lz + d / 3
    static[G1, G1] = optics.delta + levels.d_gs + levels.v_parallel
    static[G0, G0] = optics.delta

    static[A1, E1] = v1
    static[A1, E2] = v2
    static[A2, E1] = v2
    static[A2, E2] = -v1
    static[EX, EY] = v2
    static[EX, E2] = 1j * levels.lambda_xy
    static[EY, E1] = levels.lambda_xy
    for k in (A1, A2, E1, E2):
        static[k, G1] = half_omega
    for k in (EX, EY):
        static[k, G0] = half_omega
    static[G1, G0] = levels.omega_mw / 2
    static[EX:EY + 1, EX:EY + 1] += electric_shift(*field)

    a, e1, e2 = drive.amp_a1, drive.amp_e1, drive.amp_e2
    modulation = np.zeros((8, 8), dtype=complex)
    for k in (A1, A2, E1, E2):
        modulation[k, k] = a
    modulation[EX, EX] = a + e1
    modulation[EY, EY] = a - e1
    modulation[A1, E1] = e1
    modulation[A2, E2] = -e1
    modulation[EX, EY] = e2
    modulation[A1, E2] = e2
    modulation[A2, E1] = e2

    # fill the lower triangle from the upper one; diagonal counted once
    static = np.triu(static) + np.conj(np.triu(static, 1)).T
    modulation = np.triu(modulation) + np.conj(np.triu(modulation, 1)).T
    return hermitize(static), hermitize(modulation)


def build_full8(
    t: float,
    strain: StaticStrain,
    drive: DriveParams,
    optics: OpticalParams,
    levels: FullLevelParams = FullLevelParams(),
    field: Field = (0.0, 0.0),
) -> HermitianGenerator:
    static, modulation = full8_parts(strain, drive, optics, levels, field)
    return static + modulation * drive_phase(t, drive)


def rotation_matrix(theta: float) -> np.ndarray:
    """Columns are the strain eigenstates |x′⟩, |y′⟩ in the (|x⟩, |y⟩) basis."""
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -s], [s, c]], dtype=complex)


def effective_drive(theta: float, drive: DriveParams) -> Tuple[float, float]:
    """Diagonal and off-diagonal E-channel drive in the strain eigenbasis."""
    c2, s2 = math.cos(2 * theta), math.sin(2 * theta)
    diagonal = drive.amp_e1 * c2 + drive.amp_e2 * s2
    off_diagonal = -drive.amp_e1 * s2 + drive.amp_e2 * c2
    return diagonal, off_diagonal


def rotated_spin0_parts(
    strain: StaticStrain,
    drive: DriveParams,
    optics: OpticalParams,
    dipole: Dipole = "both",
    field: Field = (0.0, 0.0),
) -> Tuple[np.ndarray, np.ndarray]:
    theta = mixing_angle(strain).theta if strain.delta_x > 0 else 0.0
    rot = np.eye(3, dtype=complex)
    rot[:2, :2] = rotation_matrix(theta)
    static, modulation = spin0_parts(strain, drive, optics, field)
    static = rot.conj().T @ static @ rot
    modulation = rot.conj().T @ modulation @ rot
    if dipole != "both":
        bright = X if dipole == "x" else Y
        dark = Y if dipole == "x" else X
        static[G, bright] = static[bright, G] = optics.omega / 2
        static[G, dark] = static[dark, G] = 0.0
    return hermitize(static), hermitize(modulation)


def build_rotated_spin0(
    t: float,
    strain: StaticStrain,
    drive: DriveParams,
    optics: OpticalParams,
    dipole: Dipole = "both",
    field: Field = (0.0, 0.0),
) -> HermitianGenerator:
    """Spin-0 generator in the strain eigenbasis (|x′⟩, |y′⟩, |g⟩)."""
    static, modulation = rotated_spin0_parts(strain, drive, optics, dipole, field)
    return static + modulation * drive_phase(t, drive)
