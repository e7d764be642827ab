#!/usr/bin/env python3
"""
cli.py – command line front end

    nvsim ple --config nv1.toml
    nvsim map --config nv2.toml --set drive.omega_m=1.6 --plot
    nvsim validate --config nv1.toml

Exit codes: 0 success, 1 unexpected failure, 2 config error, 3 numerical
failure, 4 fit not converged (only with --strict).
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from typing import List, Optional, Sequence

from . import __version__
from .config import NvsimConfig
from .errors import ConfigError, NotConverged, NumericalError, NvsimError
from .run_config import SCENARIOS, load_run_config
from .runner import derived_quantities, run_scenario

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_NOT_CONVERGED = 4


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", "-c", required=True, help="Path to a TOML/JSON run config (or a sidecar JSON)")
    parser.add_argument(
        "--set",
        dest="overrides",
        action="append",
        default=[],
        metavar="KEY=VALUE",
        help="Override a config value, e.g. drive.omega_m=1.6 (repeatable)",
    )
    parser.add_argument("--verbose", "-v", action="store_true", help="Enable verbose logging")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nvsim",
        description="Phonon-dressed optical spectroscopy of NV centers.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    for scenario in SCENARIOS:
        p = sub.add_parser(scenario, help=f"Run the '{scenario}' scenario")
        _add_common(p)
        p.add_argument("--out", "-o", help=f"Output directory (default: {NvsimConfig.OUTPUT_DIR})")
        p.add_argument("--plot", action="store_true", help="Also write a matplotlib script for the CSV")
        p.add_argument("--strict", action="store_true", help="Exit 4 when a fit does not converge")
        p.add_argument("--workers", "-w", type=int, help="Worker threads (default: NVSIM_WORKERS or CPU count)")

    p = sub.add_parser("validate", help="Check a config and print derived quantities without computing")
    _add_common(p)
    return parser


def _print_validation(cfg, derived: dict, notes: List[str]) -> None:
    print(f"✅ Config OK: scenario '{cfg.scenario}', model '{cfg.model}'")
    print("📋 Resolved config:")
    print(json.dumps(cfg.model_dump(mode="json", exclude_none=True), indent=2))
    print("📊 Derived quantities:")
    labels = {
        "splitting_ghz": "2Δx (GHz)",
        "theta_rad": "θ (rad)",
        "s0": "s0",
        "dt_max_ns": "dt_max (ns)",
        "floquet_trunc_n": "Floquet truncation",
        "ideal_e1_over_a1": "ideal ℰ1/𝒜",
        "e1_over_a1": "ℰ1/𝒜",
        "ring_up_envelope": "ring-up envelope",
        "polaron_valid": "multi-phonon regime",
    }
    for key, label in labels.items():
        if key in derived:
            value = derived[key]
            shown = f"{value:.6g}" if isinstance(value, float) else value
            print(f"   {label}: {shown}")
    for note in notes:
        print(f"⚠️  Warning: {note}")


def _validate(args: argparse.Namespace) -> int:
    cfg = load_run_config(args.config, args.overrides)
    derived, notes = derived_quantities(cfg)
    _print_validation(cfg, derived, notes)
    return EXIT_OK


def _run(args: argparse.Namespace) -> int:
    cfg = load_run_config(args.config, args.overrides, scenario=args.command)
    if args.workers is not None and args.workers < 1:
        raise ConfigError("--workers must be >= 1", key="workers")
    print(f"🚀 Running '{cfg.scenario}' ({cfg.model})...")
    outcome = run_scenario(
        cfg,
        out_dir=args.out,
        plot=args.plot,
        strict=args.strict,
        workers=args.workers,
        progress=True,
        source=args.config,
    )
    print(f"✅ Done in {outcome.wall_time:.2f}s")
    for path in outcome.artifacts:
        print(f"   {path}")
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    NvsimConfig.configure_logging(args.verbose)

    try:
        if args.command == "validate":
            return _validate(args)
        return _run(args)
    except ConfigError as e:
        where = f" [{e.key}]" if e.key else ""
        print(f"❌ Config error{where}: {e}")
        return EXIT_CONFIG
    except NotConverged as e:
        print(f"❌ Error: {e}")
        if e.result is not None:
            print(f"   best so far: A={e.result.amp_a1:.5f} GHz, E1={e.result.amp_e1:.5f} GHz")
        return EXIT_NOT_CONVERGED
    except NumericalError as e:
        print(f"❌ Numerical error: {e}")
        return EXIT_NUMERICAL
    except NvsimError as e:
        print(f"❌ Error: {e}")
        return EXIT_FAILURE
    except KeyboardInterrupt:
        print("\n\nRun interrupted by user")
        return EXIT_FAILURE
    except Exception as e:
        logger.debug("Unexpected failure", exc_info=True)
        print(f"\nUnexpected error: {e}")
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
