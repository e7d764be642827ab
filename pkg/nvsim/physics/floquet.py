"""
floquet.py
----------

Sideband picture of a periodically modulated optical transition.

A transition whose upper level is modulated as 𝐀·cos(ω_m t) splits into a
comb of sidebands at n·ω_m with weights J_n²(𝐀/ω_m). This module provides
the Bessel functions (Miller's downward recurrence, no special-function
library), the truncated Floquet Hamiltonian of the two-level problem, its
quasienergies, the saturated sideband heights and a general Floquet block
matrix for any N-level H(t) = static + modulation·cos(ω_m t + phase).
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.linalg import eigh

from ..errors import OutOfRange, TruncationTooSmall

logger = logging.getLogger(__name__)

BESSEL_X_LIMIT = 700.0
TRUNCATION_MARGIN = 5
_RESCALE = 1e10
_SEED = 1e-30
_SMALL_X = 1e-8


@dataclass(frozen=True)
class FloquetMatrix:
    trunc_n: int
    matrix: np.ndarray
    delta: float
    omega: float
    amp: float
    omega_m: float

    @property
    def size(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True)
class SidebandWeights:
    orders: np.ndarray
    weights: np.ndarray
    saturated_heights: np.ndarray
    s0: float

    def height(self, n: int) -> float:
        return float(self.saturated_heights[int(n) + (len(self.orders) - 1) // 2])


# ---------------------------------------------------------------------------
# Bessel functions


def bessel_j_orders(n_max: int, x: float) -> np.ndarray:
    """J_0(x) … J_{n_max}(x) from one downward recurrence.

    The recurrence J_{k-1} = (2k/x)·J_k − J_{k+1} is started well above
    max(n_max, |x|) from an arbitrary seed and normalised with
    J_0 + 2·Σ J_{2k} = 1.
    """
    if not math.isfinite(x) or abs(x) >= BESSEL_X_LIMIT:
        raise OutOfRange(f"|x| = {abs(x)} outside the supported range [0, {BESSEL_X_LIMIT})")
    n_max = int(n_max)
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    out = np.zeros(n_max + 1)
    if x == 0:
        out[0] = 1.0
        return out

    ax = abs(x)
    if ax < _SMALL_X:
        # leading series term, exact to double precision
        out[:] = [(0.5 * x) ** i / math.factorial(i) for i in range(n_max + 1)]
        return out

    top = max(n_max, int(ax)) + 50 + int(10 * ax ** (1.0 / 3.0))
    top += top % 2
    vals = np.zeros(top + 1)
    j_above, j = 0.0, _SEED
    vals[top] = j
    for k in range(top, 0, -1):
        j_below = (2.0 * k / ax) * j - j_above
        j_above, j = j, j_below
        vals[k - 1] = j
        if abs(j) > _RESCALE:
            scale = abs(j)
            vals[k - 1 :] /= scale
            j_above /= scale
            j = 1.0 if j > 0 else -1.0

    norm = vals[0] + 2.0 * vals[2::2].sum()
    out[:] = vals[: n_max + 1] / norm
    if x < 0:
        out[1::2] *= -1.0
    return out


def bessel_j(n: int, x: float) -> float:
    """Bessel function of the first kind J_n(x) for integer n."""
    order = abs(int(n))
    value = float(bessel_j_orders(order, x)[order])
    if n < 0 and order % 2:
        value = -value
    return value


def _signed_orders(n_max: int, x: float) -> np.ndarray:
    """J_k(x) for k = −n_max … n_max."""
    pos = bessel_j_orders(n_max, x)
    neg = pos[:0:-1] * np.where(np.arange(n_max, 0, -1) % 2, -1.0, 1.0)
    return np.concatenate([neg, pos])


# ---------------------------------------------------------------------------
# Two-level Floquet problem


def required_truncation(amp: float, omega_m: float) -> int:
    return int(math.ceil(abs(amp) / omega_m)) + TRUNCATION_MARGIN


def build_floquet(
    delta: float,
    omega: float,
    amp: float,
    omega_m: float,
    trunc_n: int,
) -> FloquetMatrix:
    """Truncated Floquet Hamiltonian of |g⟩ ↔ |x⟩ with |x⟩ modulated by amp.

    Ordering: |g, m=+N⟩ … |g, m=−N⟩, |x, n=+N⟩ … |x, n=−N⟩. Diagonals are
    m·ω_m and −Δ + n·ω_m; the (g,m)–(x,n) coupling is Ω/2·J_{n−m}(amp/ω_m).
    """
    if omega_m <= 0:
        raise ValueError("omega_m must be > 0")
    need = required_truncation(amp, omega_m)
    if trunc_n < need:
        raise TruncationTooSmall(f"trunc_n={trunc_n} below required {need}", required=need)

    n_blocks = 2 * trunc_n + 1
    ladder = np.arange(trunc_n, -trunc_n - 1, -1, dtype=float)
    bessel = _signed_orders(2 * trunc_n, amp / omega_m)  # index k + 2N ↔ J_k

    matrix = np.zeros((2 * n_blocks, 2 * n_blocks))
    matrix[:n_blocks, :n_blocks] = np.diag(ladder * omega_m)
    matrix[n_blocks:, n_blocks:] = np.diag(-delta + ladder * omega_m)
    m = ladder[:, None]
    n = ladder[None, :]
    coupling = 0.5 * omega * bessel[(n - m).astype(int) + 2 * trunc_n]
    matrix[:n_blocks, n_blocks:] = coupling
    matrix[n_blocks:, :n_blocks] = coupling.T
    return FloquetMatrix(trunc_n, matrix, delta, omega, amp, omega_m)


def fold_quasienergy(values: np.ndarray | float, omega_m: float) -> np.ndarray:
    """Map energies into the zone [−ω_m/2, ω_m/2)."""
    return (np.asarray(values, dtype=float) + 0.5 * omega_m) % omega_m - 0.5 * omega_m


def quasienergies(fm: FloquetMatrix) -> np.ndarray:
    """Folded, ascending eigenvalues of a Floquet matrix."""
    energies = eigh(fm.matrix, eigvals_only=True)
    return np.sort(fold_quasienergy(energies, fm.omega_m))


def sideband_heights(amp: float, omega_m: float, s0: float, max_order: int) -> SidebandWeights:
    """J_n² weights and saturated heights s0·J_n²/(1 + s0·J_n²), |n| ≤ max_order."""
    if s0 < 0:
        raise ValueError("saturation parameter must be >= 0")
    orders = np.arange(-max_order, max_order + 1)
    weights = _signed_orders(max_order, amp / omega_m) ** 2
    heights = s0 * weights / (1.0 + s0 * weights)
    return SidebandWeights(orders=orders, weights=weights, saturated_heights=heights, s0=s0)


def sideband_count(sidebands: SidebandWeights, min_frac: float = 0.1) -> int:
    """Orders whose height exceeds min_frac of the saturation limit s0/(1+s0)."""
    ceiling = sidebands.s0 / (1.0 + sidebands.s0)
    if ceiling == 0:
        return 0
    return int(np.count_nonzero(sidebands.saturated_heights >= min_frac * ceiling))


# ---------------------------------------------------------------------------
# General N-level Floquet matrix


def floquet_matrix(
    static: np.ndarray,
    modulation: np.ndarray,
    omega_m: float,
    trunc_n: int,
    phase: float = 0.0,
) -> np.ndarray:
    """Block matrix of static + modulation·cos(2π ω_m t + phase).

    Blocks run over Fourier index m = +N … −N; within a block the levels
    keep the order of ``static``.
    """
    dim = static.shape[0]
    n_blocks = 2 * trunc_n + 1
    hf = np.zeros((n_blocks * dim, n_blocks * dim), dtype=complex)
    up = 0.5 * modulation * np.exp(1j * phase)
    for i in range(n_blocks):
        m = trunc_n - i
        sl = slice(i * dim, (i + 1) * dim)
        hf[sl, sl] = static + m * omega_m * np.eye(dim)
        if i + 1 < n_blocks:
            nxt = slice((i + 1) * dim, (i + 2) * dim)
            hf[sl, nxt] = up
            hf[nxt, sl] = np.conj(up).T
    return hf


def central_weights(vectors: np.ndarray, dim: int, trunc_n: int) -> np.ndarray:
    """Weight of each eigenvector (column) on the m = 0 block."""
    start = trunc_n * dim
    block = vectors[start : start + dim, :]
    return np.sum(np.abs(block) ** 2, axis=0)


def floquet_spectrum(
    static: np.ndarray,
    modulation: np.ndarray,
    omega_m: float,
    trunc_n: int,
    phase: float = 0.0,
) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues and m = 0 weights of the general Floquet matrix."""
    values, vectors = eigh(floquet_matrix(static, modulation, omega_m, trunc_n, phase))
    return values, central_weights(vectors, static.shape[0], trunc_n)


def nearest_pair_gap(values: Sequence[float], center: float = 0.0) -> float:
    """Separation of the two eigenvalues closest to center."""
    arr = np.asarray(values, dtype=float)
    idx = np.argsort(np.abs(arr - center))[:2]
    return float(abs(arr[idx[0]] - arr[idx[1]]))
