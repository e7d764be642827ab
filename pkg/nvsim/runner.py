"""
runner.py
---------

Scenario dispatch shared by the command line and the task queue.

Each scenario turns a validated RunConfig into a table (header + rows) and
a summary dictionary; ``run_scenario`` writes them out as the data CSV and
the sidecar JSON (and a plot script on request).
"""

from __future__ import annotations

import logging
import math
import time
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy as np

from . import __version__
from .artifacts import provenance_lines, write_csv, write_plot_script, write_sidecar
from .config import NvsimConfig
from .errors import DegenerateStrain, NotConverged
from .experiments.cdd import cdd_dispersion
from .experiments.fitting import FitResult, fit_drive_params, simulate_map, with_noise
from .experiments.peaks import extract_peaks
from .experiments.rabi import OpticalPulse, flop_period, rabi_flopping
from .experiments.resonator import ResonatorModel, resonator_sideband_scan, ring_up_envelope
from .experiments.sweeps import SpectrumMap, dressed_map, scalings_from_power
from .physics.dressed_analytics import polaron_params, resonant_coupling, resonant_drive_frequency
from .physics.floquet import build_floquet, quasienergies, required_truncation, sideband_count, sideband_heights
from .physics.lindblad import max_stable_step, ple_spectrum
from .physics.strain_model import (
    extract_mixing_angle,
    ideal_drive_ratio,
    mixing_angle,
    polarization_curve,
    static_splitting,
)
from .run_config import RunConfig

logger = logging.getLogger(__name__)

DEFAULT_Q = 1500.0
TOOL_STEM = "nvsim"

Table = Tuple[List[str], List[List[Any]], Dict[str, Any]]


@dataclass
class RunOutcome:
    scenario: str
    csv_path: Path
    sidecar_path: Path
    plot_path: Optional[Path] = None
    summary: Dict[str, Any] = field(default_factory=dict)
    derived: Dict[str, Any] = field(default_factory=dict)
    wall_time: float = 0.0

    @property
    def artifacts(self) -> List[str]:
        paths = [self.csv_path, self.sidecar_path] + ([self.plot_path] if self.plot_path else [])
        return [str(p) for p in paths]


@dataclass
class RunContext:
    workers: int
    progress: bool = False
    strict: bool = False


# ---------------------------------------------------------------------------
# Derived quantities (reported by `validate` and stored in every sidecar)


def derived_quantities(cfg: RunConfig) -> Tuple[Dict[str, Any], List[str]]:
    """Quantities that follow from the config without a simulation, plus warnings."""
    derived: Dict[str, Any] = {"scenario": cfg.scenario, "model": cfg.model}
    warnings_out: List[str] = []
    strain = cfg.strain.params() if cfg.strain else None
    drive = cfg.drive.params() if cfg.drive else None
    optics = cfg.optics.params() if cfg.optics else None

    if strain is not None:
        derived["splitting_ghz"] = static_splitting(strain)
        try:
            derived["theta_rad"] = mixing_angle(strain).theta
        except DegenerateStrain:
            derived["theta_rad"] = None
    if optics is not None:
        derived["s0"] = optics.s0
    derived["ideal_e1_over_a1"] = ideal_drive_ratio()

    if drive is not None:
        branch_amp = max(abs(drive.amp_a1 + drive.amp_e1), abs(drive.amp_a1 - drive.amp_e1))
        derived["floquet_trunc_n"] = required_truncation(branch_amp, drive.omega_m)
        q = cfg.resonator.q if cfg.resonator else DEFAULT_Q
        derived["ring_up_envelope"] = ring_up_envelope(cfg.sequence.ring_up, drive.omega_m, q)
        if drive.amp_a1:
            derived["e1_over_a1"] = drive.amp_e1 / drive.amp_a1
        if strain is not None and derived.get("theta_rad") is not None:
            coupling = abs(drive.amp_e1 * math.sin(2 * derived["theta_rad"]))
            derived["polaron_valid"] = drive.omega_m > coupling
            if not derived["polaron_valid"]:
                warnings_out.append(
                    f"omega_m={drive.omega_m} GHz is below E1*sin2theta={coupling:.4g} GHz (multi-phonon picture invalid)"
                )

    if strain is not None and drive is not None and optics is not None:
        detunings = cfg.grid.detuning_axis() if cfg.grid else None
        dt_max = max_stable_step(strain, drive, optics, detunings, cfg.model, cfg.levels.params())
        derived["dt_max_ns"] = dt_max
        if cfg.sequence.dt is not None and cfg.sequence.dt > dt_max:
            warnings_out.append(f"sequence.dt={cfg.sequence.dt} ns exceeds the stability bound dt_max={dt_max:.6g} ns")
    return derived, warnings_out


# ---------------------------------------------------------------------------
# Scenarios


def _ple(cfg: RunConfig, ctx: RunContext) -> Table:
    detunings = cfg.grid.detuning_axis()
    pl = ple_spectrum(
        detunings,
        cfg.strain.params(),
        cfg.drive.params(),
        cfg.optics.params(),
        cfg.sequence.params(),
        cfg.model,
        cfg.init,
        levels=cfg.levels.params(),
        field=cfg.field,
        workers=ctx.workers,
        progress=ctx.progress,
    )
    peaks = extract_peaks(detunings, pl) if detunings.size >= 3 else []
    summary = {"points": int(detunings.size), "peaks_ghz": [p.position for p in peaks]}
    return ["detuning_ghz", "pl"], [[d, v] for d, v in zip(detunings, pl)], summary


def _map(cfg: RunConfig, ctx: RunContext) -> Table:
    detunings = cfg.grid.detuning_axis()
    drive = cfg.drive.params()
    label = "amp_a1_ghz"
    if cfg.grid.powers_mw is not None:
        scalings = scalings_from_power(cfg.grid.powers_mw, cfg.grid.power_calibration, drive)
        label = "power_mw"
    else:
        scalings = cfg.grid.scaling_axis()
    smap = dressed_map(
        detunings,
        scalings,
        drive,
        cfg.strain.params(),
        cfg.optics.params(),
        cfg.model,
        cfg.init,
        sequence=cfg.sequence.params(),
        levels=cfg.levels.params(),
        field=cfg.field,
        workers=ctx.workers,
        progress=ctx.progress,
        axis_label=label,
    )
    axis = np.asarray(cfg.grid.powers_mw, dtype=float) if label == "power_mw" else smap.amplitudes
    header = [label] + [f"pl_at_detuning_ghz={d!r}" for d in detunings.tolist()]
    rows = [[a] + list(row) for a, row in zip(axis, smap.pl)]
    summary = {"rows": int(smap.shape[0]), "columns": int(smap.shape[1]), "scalings": smap.scalings}
    return header, rows, summary


def _floquet(cfg: RunConfig, ctx: RunContext) -> Table:
    drive = cfg.drive.params()
    optics = cfg.optics.params()
    sign = 1.0 if cfg.floquet.branch == "x" else -1.0
    amp = drive.amp_a1 + sign * drive.amp_e1
    trunc_n = cfg.floquet.trunc_n or required_truncation(amp, drive.omega_m)
    fm = build_floquet(optics.delta, optics.omega, amp, drive.omega_m, trunc_n)
    sidebands = sideband_heights(amp, drive.omega_m, optics.s0, cfg.floquet.max_order)
    rows = [[int(n), w, h] for n, w, h in zip(sidebands.orders, sidebands.weights, sidebands.saturated_heights)]
    summary = {
        "branch_amplitude_ghz": amp,
        "trunc_n": trunc_n,
        "quasienergies_ghz": quasienergies(fm),
        "observable_sidebands": sideband_count(sidebands, cfg.floquet.min_frac),
    }
    return ["order", "weight", "height"], rows, summary


def _rabi(cfg: RunConfig, ctx: RunContext) -> Table:
    strain = cfg.strain.params()
    drive = cfg.drive.params()
    if cfg.rabi.phonons is not None:
        drive = replace(drive, omega_m=resonant_drive_frequency(strain.delta_x, cfg.rabi.phonons))
        logger.info("Drive tuned to the %d-phonon resonance: omega_m=%.5f GHz", cfg.rabi.phonons, drive.omega_m)
    p = polaron_params(strain, drive)
    pulse = OpticalPulse(
        duration=cfg.rabi.pulse_duration,
        branch=cfg.rabi.branch,
        drive_during_pulse=cfg.rabi.drive_during_pulse,
    )
    optics = cfg.optics.params()
    result = rabi_flopping(
        p,
        optics,
        pulse,
        cfg.rabi.t_span,
        dt=cfg.sequence.dt,
        store_every=cfg.rabi.store_every,
    )
    t_pulse = pulse.length(optics.omega)
    order = max(0, int(round(2.0 * strain.delta_x / drive.omega_m)) - 1)
    coupling = resonant_coupling(order, p)
    summary = {
        "omega_m_ghz": drive.omega_m,
        "phonon_order": order + 1,
        "pulse_ns": t_pulse,
        "flop_period_ns": flop_period(result, t_pulse),
        "predicted_period_ns": 1.0 / (2.0 * abs(coupling)) if coupling else math.inf,
    }
    rows = [[t, pops[0], pops[1], pops[2]] for t, pops in zip(result.times, result.populations)]
    return ["time_ns", "pop_x", "pop_y", "pop_g"], rows, summary


def _cdd(cfg: RunConfig, ctx: RunContext) -> Table:
    result = cdd_dispersion(
        cfg.cdd.eps_axis(),
        cfg.cdd.channel,
        cfg.strain.params(),
        cfg.drive.params(),
        cfg.optics.params(),
        method=cfg.cdd.method,
        trunc_n=cfg.cdd.trunc_n,
        detunings=cfg.grid.detuning_axis() if cfg.grid else None,
        sequence=cfg.sequence.params(),
        workers=ctx.workers,
    )
    rows = [[e, lo, hi] for e, lo, hi in zip(result.eps, result.lower, result.upper)]
    summary = {
        "channel": result.channel,
        "method": result.method,
        "slope_lower": result.slope_lower,
        "slope_upper": result.slope_upper,
        "slope": result.slope,
        "undriven_slope": result.undriven_slope,
        "suppression": result.suppression,
    }
    return ["eps_ghz", "freq_lower_ghz", "freq_upper_ghz"], rows, summary


def _fit_table(result: FitResult, truth: Dict[str, float]) -> Table:
    rows = [[i, v] for i, v in enumerate(result.history)]
    summary = {"fit": result.to_dict(), "truth": truth}
    return ["iteration", "best_objective"], rows, summary


def _fit(cfg: RunConfig, ctx: RunContext) -> Table:
    fit = cfg.fit
    strain = cfg.strain.params()
    optics = cfg.optics.params()
    initial = cfg.drive.params()
    detunings = cfg.grid.detuning_axis()
    scalings = cfg.grid.scaling_axis()
    template = SpectrumMap(detunings, scalings, np.zeros((scalings.size, detunings.size)), scalings=scalings)
    simulation: Dict[str, Any] = {}
    if fit.model == "lindblad":
        simulation = {
            "model": cfg.model,
            "init": cfg.init,
            "sequence": cfg.sequence.params(),
            "levels": cfg.levels.params(),
            "field": cfg.field,
            "workers": ctx.workers,
        }
    truth_drive = replace(initial, amp_a1=fit.target_amp_a1, amp_e1=fit.target_amp_e1)
    target = simulate_map(template, truth_drive, strain, optics, fit.model, **simulation)
    if fit.noise > 0:
        target = with_noise(target, fit.noise, fit.seed)
    truth = {"amp_a1": fit.target_amp_a1, "amp_e1": fit.target_amp_e1, "noise": fit.noise}

    try:
        result = fit_drive_params(
            target,
            initial,
            strain,
            optics,
            fit.bounds,
            model=fit.model,
            xatol=fit.xatol,
            max_iter=fit.max_iter,
            strict=ctx.strict,
            **simulation,
        )
    except NotConverged as e:
        # artifacts are still written for the best-so-far point
        e.table = _fit_table(e.result, truth)
        raise
    return _fit_table(result, truth)


def _polarization(cfg: RunConfig, ctx: RunContext) -> Table:
    theta = mixing_angle(cfg.strain.params())
    pol = cfg.polarization
    angles = np.linspace(0.0, math.pi, pol.points)
    curve = polarization_curve(theta, pol.phi0, pol.s0, angles)
    recovered = extract_mixing_angle(curve, pol.phi0, pol.s0)
    rows = [[a, x, y] for a, x, y in zip(curve.angles, curve.pl_x, curve.pl_y)]
    summary = {"theta_rad": theta.theta, "recovered_theta_rad": recovered.theta}
    return ["angle_rad", "pl_x", "pl_y"], rows, summary


def _resonator(cfg: RunConfig, ctx: RunContext) -> Table:
    block = cfg.resonator
    model = ResonatorModel(f_lo=block.f_lo, f_hi=block.f_hi, fsr=block.fsr, q=block.q)
    freqs = block.scan_axis()
    response, counts = resonator_sideband_scan(freqs, block.base_amp, model, block.s0, block.min_frac)
    best = int(np.argmax(counts))
    summary = {
        "modes": int(model.modes.size),
        "best_drive_ghz": freqs[best],
        "max_sidebands": int(counts[best]),
        "ring_up_envelope": ring_up_envelope(cfg.sequence.ring_up, model.nearest_mode(freqs[best]), model.q),
    }
    rows = [[f, r, int(c)] for f, r, c in zip(freqs, response, counts)]
    return ["drive_ghz", "response", "sidebands"], rows, summary


SCENARIO_RUNNERS: Dict[str, Callable[[RunConfig, RunContext], Table]] = {
    "ple": _ple,
    "map": _map,
    "floquet": _floquet,
    "rabi": _rabi,
    "cdd": _cdd,
    "fit": _fit,
    "polarization": _polarization,
    "resonator": _resonator,
}


# ---------------------------------------------------------------------------
# Entry point


def output_stem(cfg: RunConfig, source: Optional[str]) -> str:
    if cfg.output.name:
        return cfg.output.name
    if source:
        stem = Path(source).stem
        # re-runs from a sidecar keep the original stem
        return stem[: -len(f"_{cfg.scenario}")] if stem.endswith(f"_{cfg.scenario}") else stem
    return TOOL_STEM


def _write(
    cfg: RunConfig,
    table: Table,
    out_dir: Path,
    stem: str,
    plot: bool,
    derived: Dict[str, Any],
    wall_time: float,
    status: str,
) -> RunOutcome:
    header, rows, summary = table
    csv_path = write_csv(out_dir / f"{stem}_{cfg.scenario}.csv", header, rows, provenance_lines(cfg.scenario, cfg.model))
    sidecar_path = out_dir / f"{stem}_{cfg.scenario}.json"
    plot_path = write_plot_script(out_dir / f"{stem}_{cfg.scenario}_plot.py", csv_path, cfg.scenario) if plot else None
    write_sidecar(
        sidecar_path,
        {
            "nvsim_version": __version__,
            "scenario": cfg.scenario,
            "status": status,
            "config": cfg.model_dump(mode="json"),
            "wall_time_s": wall_time,
            "derived": derived,
            "summary": summary,
            "artifacts": {"csv": csv_path.name, "plot": plot_path.name if plot_path else None},
        },
    )
    return RunOutcome(
        scenario=cfg.scenario,
        csv_path=csv_path,
        sidecar_path=sidecar_path,
        plot_path=plot_path,
        summary=summary,
        derived=derived,
        wall_time=wall_time,
    )


def run_scenario(
    cfg: RunConfig,
    *,
    out_dir: Optional[str | Path] = None,
    plot: bool = False,
    strict: bool = False,
    workers: Optional[int] = None,
    progress: bool = False,
    source: Optional[str] = None,
) -> RunOutcome:
    """Run one configured scenario and write its artifacts."""
    target_dir = Path(NvsimConfig.ensure_output_dir(str(out_dir or cfg.output.dir or NvsimConfig.OUTPUT_DIR)))
    ctx = RunContext(
        workers=NvsimConfig.resolve_workers(workers if workers is not None else cfg.workers),
        progress=progress,
        strict=strict,
    )
    derived, notes = derived_quantities(cfg)
    for note in notes:
        logger.warning(note)
    stem = output_stem(cfg, source)

    logger.info("Running scenario '%s' with %d workers", cfg.scenario, ctx.workers)
    start = time.perf_counter()
    try:
        table = SCENARIO_RUNNERS[cfg.scenario](cfg, ctx)
    except NotConverged as e:
        partial = getattr(e, "table", None)
        if partial is not None:
            _write(cfg, partial, target_dir, stem, plot, derived, time.perf_counter() - start, "not_converged")
        raise
    wall_time = time.perf_counter() - start
    outcome = _write(cfg, table, target_dir, stem, plot, derived, wall_time, "ok")
    logger.info("Scenario '%s' finished in %.2f s -> %s", cfg.scenario, wall_time, outcome.csv_path)
    return outcome
