"""Command-line entry point: ``cpwedge {plate,wedge,pec-wedge,validate}``.

Exit codes: 0 success, 1 validation failure, 2 configuration error,
3 tolerance miss in strict mode.
"""

from __future__ import annotations

import argparse
import logging
import sys

from . import __version__
from .geometry import ConfigurationError
from .runs import (
    report_json,
    run_pec_wedge,
    run_plate,
    run_validate,
    run_wedge,
    wedge_columns,
    write_csv,
)
from .validation import FAULTS

__all__ = ["main", "build_parser"]

EXIT_OK, EXIT_VALIDATION, EXIT_CONFIG, EXIT_TOLERANCE = 0, 1, 2, 3

log = logging.getLogger("cpwedge")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="INI file with media/geometry/sweep/integration/output sections")
    common.add_argument("--output", help="CSV destination (default: stdout)")
    common.add_argument("--tolerance", type=float, help="relative tolerance per MSE order")
    common.add_argument("--max-order", type=int, help="highest MSE order to evaluate")
    common.add_argument("--seed", type=int, help="base seed of the randomized quadrature")
    common.add_argument("--threads", type=int, help="concurrent phi rows")
    common.add_argument("--strict", action="store_true", default=None,
                        help="exit with status 3 if any order misses its tolerance")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="cpwedge", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("plate", parents=[common], help="dielectric half-space against the exact result")
    sub.add_parser("wedge", parents=[common], help="smoothed dielectric wedge, phi sweep")
    sub.add_parser("pec-wedge", parents=[common], help="closed-form PEC, proximity and reduced tables")
    v = sub.add_parser("validate", parents=[common], help="fast invariant checks")
    v.add_argument("--inject-fault", choices=FAULTS, help=argparse.SUPPRESS)
    return p


def _load(args):
    from .config import load_config

    overrides = dict(
        rel_tol=args.tolerance,
        max_order=args.max_order,
        seed=args.seed,
        threads=args.threads,
        strict=args.strict,
        output=args.output,
    )
    if args.command == "plate":
        overrides.update(theta=0.0, r_over_d=0.0, phi=[0.0])
    return load_config(args.config, **overrides)


def _emit(text: str, path: str | None):
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="") as fh:
            fh.write(text)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = _load(args)
    except (ConfigurationError, ValueError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    if args.command == "validate":
        report = run_validate(cfg, inject_fault=args.inject_fault)
        _emit(report_json(report) + "\n", cfg.output)
        return EXIT_OK if report["passed"] else EXIT_VALIDATION

    try:
        if args.command == "plate":
            rows = run_plate(cfg)
            columns = None
        elif args.command == "wedge":
            rows = run_wedge(cfg)
            columns = wedge_columns(cfg.max_order)
        else:
            rows = run_pec_wedge(cfg)
            columns = None
    except ConfigurationError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    _emit(write_csv(rows, cfg, args.command, columns), cfg.output)
    missed = [r for r in rows if r.get("status", "ok") != "ok"]
    for r in missed:
        log.warning("row %s: %s", r.get("phi", r.get("epsilon1")), r["status"])
    if missed and cfg.strict:
        return EXIT_TOLERANCE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
