"""
lindblad.py
-----------

Density-matrix evolution under the Lindblad master equation and the
photoluminescence-excitation (PLE) observable.

Generators are in GHz and times in ns; the right-hand side multiplies by
2π so the integration runs in rad/ns. Optical decay channels are given as
(excited index, ground index, rate in GHz) triples, each standing for the
jump operator |g⟩⟨e|.

The integrator is a classical fixed-step fourth-order Runge–Kutta scheme.
States may be batched: a stack of shape (B, N, N) is propagated in one go,
which is how a PLE spectrum evaluates many detunings at once.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass
from typing import Callable, List, Literal, Optional, Sequence, Tuple, Union

import numpy as np
from tqdm import tqdm

from ..config import NvsimConfig
from ..errors import DimensionMismatch, StepTooLarge
from .hamiltonians import (
    EX,
    EY,
    FULL8_EXCITED,
    G,
    G0,
    G1,
    SPIN0_EXCITED,
    Field,
    full8_parts,
    spin0_parts,
)
from .params import DriveParams, FullLevelParams, OpticalParams, PulseSequence, StaticStrain

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * math.pi
STEPS_PER_PERIOD = 50
TRACE_TOLERANCE = 1e-6
STATE_TOLERANCE = 1e-9

DecayChannel = Tuple[int, int, float]
Model = Literal["spin0", "full8"]
InitialState = Literal["pure-ground", "mixed-spin"]
TimeSpan = Union[float, Tuple[float, float]]

# A dim×dim complex ndarray (or a stack of them): Hermitian, unit trace, PSD
DensityMatrix = np.ndarray


@dataclass
class EvolutionResult:
    times: np.ndarray
    populations: np.ndarray  # (samples, [batch,] dim)
    pl: Union[float, np.ndarray]
    rho: np.ndarray
    states: Optional[np.ndarray] = None


# ---------------------------------------------------------------------------
# States and channels


def model_dim(model: Model) -> int:
    return 3 if model == "spin0" else 8


def ground_state(model: Model = "spin0") -> DensityMatrix:
    """|g, m_s=0⟩⟨g, m_s=0| of the chosen model."""
    dim = model_dim(model)
    rho = np.zeros((dim, dim), dtype=complex)
    g = G if model == "spin0" else G0
    rho[g, g] = 1.0
    return rho


def mixed_spin_state() -> DensityMatrix:
    """½|g,1⟩⟨g,1| + ½|g,0⟩⟨g,0| of the 8-level model."""
    rho = np.zeros((8, 8), dtype=complex)
    rho[G1, G1] = rho[G0, G0] = 0.5
    return rho


def initial_state(model: Model, init: InitialState) -> DensityMatrix:
    if init == "pure-ground":
        return ground_state(model)
    if init == "mixed-spin":
        if model != "full8":
            raise ValueError("mixed-spin initial state needs the full8 model")
        return mixed_spin_state()
    raise ValueError(f"unknown initial state {init!r}")


def decay_channels(model: Model, gamma: float) -> List[DecayChannel]:
    """Spin-conserving optical decay of every excited level at rate gamma."""
    if model == "spin0":
        return [(e, G, gamma) for e in SPIN0_EXCITED]
    return [(e, G0 if e in (EX, EY) else G1, gamma) for e in FULL8_EXCITED]


def density_matrix_diagnostics(rho: DensityMatrix) -> Tuple[float, float, float]:
    """(Hermiticity error, trace error, minimum eigenvalue), worst over a batch."""
    herm = float(np.max(np.abs(rho - np.conj(np.swapaxes(rho, -1, -2)))))
    trace = np.real(np.trace(rho, axis1=-2, axis2=-1))
    trace_err = float(np.max(np.abs(trace - 1.0)))
    min_eig = float(np.min(np.linalg.eigvalsh(0.5 * (rho + np.conj(np.swapaxes(rho, -1, -2))))))
    return herm, trace_err, min_eig


def check_density_matrix(rho: DensityMatrix, tol: float = STATE_TOLERANCE) -> None:
    herm, trace_err, min_eig = density_matrix_diagnostics(rho)
    if herm > tol:
        raise ValueError(f"density matrix not Hermitian (error {herm:.2e})")
    if trace_err > tol:
        raise ValueError(f"density matrix trace off by {trace_err:.2e}")
    if min_eig < -tol:
        raise ValueError(f"density matrix has negative eigenvalue {min_eig:.2e}")


# ---------------------------------------------------------------------------
# Master equation


def lindblad_rhs(
    rho: DensityMatrix,
    h: np.ndarray,
    decay_channels: Sequence[DecayChannel],
) -> np.ndarray:
    """dρ/dt in rad/ns for a generator h in GHz."""
    dim = rho.shape[-1]
    if h.shape[-1] != dim or h.shape[-2] != dim or rho.shape[-2] != dim:
        raise DimensionMismatch(f"generator {h.shape} does not match state {rho.shape}")
    drho = -1j * TWO_PI * (h @ rho - rho @ h)
    for excited, ground, rate in decay_channels:
        if not (0 <= excited < dim and 0 <= ground < dim):
            raise DimensionMismatch(f"decay channel {excited}->{ground} outside dimension {dim}")
        r = TWO_PI * rate
        drho[..., ground, ground] += r * rho[..., excited, excited]
        drho[..., excited, :] -= 0.5 * r * rho[..., excited, :]
        drho[..., :, excited] -= 0.5 * r * rho[..., :, excited]
    return drho


def periodic_generator(
    static: np.ndarray,
    modulation: np.ndarray,
    omega_m: float,
    phase: float = 0.0,
) -> Callable[[float], np.ndarray]:
    """H(t) = static + modulation·cos(2π·ω_m·t + phase)."""

    def h_of_t(t: float) -> np.ndarray:
        return static + modulation * math.cos(TWO_PI * omega_m * t + phase)

    return h_of_t


def _emission(rho: np.ndarray, channels: Sequence[DecayChannel]) -> np.ndarray:
    total = np.zeros(rho.shape[:-2])
    for excited, _, rate in channels:
        total = total + rate * np.real(rho[..., excited, excited])
    return total


def evolve(
    rho0: DensityMatrix,
    h_of_t: Callable[[float], np.ndarray],
    decay_channels: Sequence[DecayChannel],
    t_span: TimeSpan,
    dt: float,
    *,
    store_every: int = 1,
    store_states: bool = False,
) -> EvolutionResult:
    """Fixed-step RK4 trajectory from rho0 over t_span.

    The step is shrunk so the window is covered by a whole number of
    steps. PL is Σ_k Γ_k ∫ ρ_{e_k e_k} dt over the window (trapezoid rule
    on the step grid).
    """
    if dt <= 0:
        raise ValueError("dt must be > 0")
    t_start, t_end = (0.0, float(t_span)) if np.isscalar(t_span) else map(float, t_span)
    if t_end < t_start:
        raise ValueError("t_span must end after it starts")

    rho = np.array(rho0, dtype=complex)
    reference_trace = np.real(np.trace(rho, axis1=-2, axis2=-1))
    n_steps = max(1, int(math.ceil((t_end - t_start) / dt - 1e-9)))
    step = (t_end - t_start) / n_steps
    store_every = max(1, int(store_every))

    times = [t_start]
    pops = [np.real(np.diagonal(rho, axis1=-2, axis2=-1)).copy()]
    states = [rho.copy()] if store_states else None
    emission_prev = _emission(rho, decay_channels)
    pl = np.zeros_like(emission_prev)

    t = t_start
    h_now = h_of_t(t)
    for i in range(1, n_steps + 1):
        h_mid = h_of_t(t + 0.5 * step)
        h_next = h_of_t(t + step)
        k1 = lindblad_rhs(rho, h_now, decay_channels)
        k2 = lindblad_rhs(rho + 0.5 * step * k1, h_mid, decay_channels)
        k3 = lindblad_rhs(rho + 0.5 * step * k2, h_mid, decay_channels)
        k4 = lindblad_rhs(rho + step * k3, h_next, decay_channels)
        rho = rho + (step / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        rho = 0.5 * (rho + np.conj(np.swapaxes(rho, -1, -2)))
        t = t_start + i * step
        h_now = h_next

        trace = np.real(np.trace(rho, axis1=-2, axis2=-1))
        trace_error = float(np.max(np.abs(trace - reference_trace)))
        if not math.isfinite(trace_error) or trace_error > TRACE_TOLERANCE:
            raise StepTooLarge(
                f"trace drifted by {trace_error:.3e} at t={t:.3f} ns with dt={step:.3e} ns",
                dt=step,
                trace_error=trace_error,
            )

        emission = _emission(rho, decay_channels)
        pl = pl + 0.5 * step * (emission_prev + emission)
        emission_prev = emission

        if i % store_every == 0 or i == n_steps:
            times.append(t)
            pops.append(np.real(np.diagonal(rho, axis1=-2, axis2=-1)).copy())
            if states is not None:
                states.append(rho.copy())

    return EvolutionResult(
        times=np.asarray(times),
        populations=np.asarray(pops),
        pl=float(pl) if np.ndim(pl) == 0 else pl,
        rho=rho,
        states=np.asarray(states) if states is not None else None,
    )


# ---------------------------------------------------------------------------
# PLE spectra


def full8_detuning(delta: float, levels: FullLevelParams) -> float:
    """Matrix detuning of the 8-level model for a spin-0 axis detuning."""
    return delta - 2.0 * levels.d_es / 3.0


def max_stable_step(
    strain: StaticStrain,
    drive: DriveParams,
    optics: OpticalParams,
    detunings: Optional[Sequence[float]] = None,
    model: Model = "spin0",
    levels: FullLevelParams = FullLevelParams(),
) -> float:
    """dt_max = 1 / (50·f_max) with f_max the fastest scale of the problem."""
    dets = np.abs(np.asarray(detunings if detunings is not None else [optics.delta], dtype=float))
    scales = [
        drive.omega_m,
        float(dets.max()) if dets.size else 0.0,
        2.0 * strain.delta_x,
        optics.omega,
        optics.gamma,
        abs(drive.amp_a1),
        abs(drive.amp_e1),
        abs(drive.amp_e2),
    ]
    if model == "full8":
        d_lo, d_hi = (float(np.min(detunings)), float(np.max(detunings))) if detunings is not None else (optics.delta,) * 2
        for d in (d_lo, d_hi):
            static, _ = full8_parts(strain, drive, optics.with_delta(full8_detuning(d, levels)), levels)
            diag = np.real(np.diag(static))
            scales.append(float(diag.max() - diag.min()))
    return 1.0 / (STEPS_PER_PERIOD * max(scales))


def _model_parts(
    model: Model,
    strain: StaticStrain,
    drive: DriveParams,
    optics: OpticalParams,
    levels: FullLevelParams,
    field: Field,
) -> Tuple[np.ndarray, np.ndarray]:
    if model == "spin0":
        return spin0_parts(strain, drive, optics, field)
    if model == "full8":
        shifted = optics.with_delta(full8_detuning(optics.delta, levels))
        return full8_parts(strain, drive, shifted, levels, field)
    raise ValueError(f"unknown model {model!r}")


def _ple_chunk(
    detunings: np.ndarray,
    strain: StaticStrain,
    drive: DriveParams,
    optics: OpticalParams,
    sequence: PulseSequence,
    model: Model,
    init: InitialState,
    levels: FullLevelParams,
    field: Field,
    dt: float,
) -> np.ndarray:
    statics = []
    modulation = None
    for d in detunings:
        static, modulation = _model_parts(model, strain, drive, optics.with_delta(float(d)), levels, field)
        statics.append(static)
    static_stack = np.stack(statics)
    channels = decay_channels(model, optics.gamma)
    rho = np.broadcast_to(initial_state(model, init), static_stack.shape).copy()

    if sequence.simulate_ring_up:
        dark = OpticalParams(delta=optics.delta, omega=0.0, gamma=optics.gamma)
        dark_stack = np.stack(
            [_model_parts(model, strain, drive, dark.with_delta(float(d)), levels, field)[0] for d in detunings]
        )
        ring = evolve(
            rho,
            periodic_generator(dark_stack, modulation, drive.omega_m, drive.phase),
            channels,
            (0.0, sequence.ring_up),
            dt,
            store_every=10**9,
        )
        rho = ring.rho

    result = evolve(
        rho,
        periodic_generator(static_stack, modulation, drive.omega_m, drive.phase),
        channels,
        (sequence.ring_up, sequence.ring_up + sequence.collect),
        dt,
        store_every=10**9,
    )
    return np.atleast_1d(result.pl)


def ple_spectrum(
    detunings: Sequence[float],
    strain: StaticStrain,
    drive: DriveParams,
    optics: OpticalParams,
    sequence: PulseSequence = PulseSequence(collect=200.0),
    model: Model = "spin0",
    init: InitialState = "pure-ground",
    *,
    levels: FullLevelParams = FullLevelParams(),
    field: Field = (0.0, 0.0),
    workers: Optional[int] = None,
    chunk_size: Optional[int] = None,
    progress: bool = False,
) -> np.ndarray:
    """PL collected over the collection window at every laser detuning."""
    dets = np.asarray(detunings, dtype=float)
    if dets.ndim != 1 or dets.size == 0:
        raise ValueError("ple_spectrum needs a nonempty 1-D detuning list")
    initial_state(model, init)  # validates the model/init pairing early

    dt_max = max_stable_step(strain, drive, optics, dets, model, levels)
    dt = sequence.dt if sequence.dt is not None else dt_max
    if dt > dt_max:
        logger.warning("dt=%.3e ns exceeds the stability bound dt_max=%.3e ns", dt, dt_max)

    size = chunk_size or NvsimConfig.CHUNK_SIZE
    chunks = [dets[i : i + size] for i in range(0, dets.size, size)]
    n_workers = min(NvsimConfig.resolve_workers(workers), len(chunks))
    args = (strain, drive, optics, sequence, model, init, levels, field, dt)
    logger.debug("PLE: %d detunings in %d chunks, dt=%.3e ns, %d workers", dets.size, len(chunks), dt, n_workers)

    out: List[Optional[np.ndarray]] = [None] * len(chunks)
    if n_workers <= 1:
        iterator = tqdm(range(len(chunks)), desc="PLE", disable=not progress)
        for idx in iterator:
            out[idx] = _ple_chunk(chunks[idx], *args)
    else:
        with ThreadPoolExecutor(n_workers) as pool:
            futures = {pool.submit(_ple_chunk, chunk, *args): idx for idx, chunk in enumerate(chunks)}
            for fut in tqdm(as_completed(futures), total=len(futures), desc="PLE", disable=not progress):
                out[futures[fut]] = fut.result()
    return np.concatenate(out)
