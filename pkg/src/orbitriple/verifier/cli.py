"""Command-line entry point: ``verify <scenario-file> [options]``."""

from __future__ import annotations

import argparse
import logging
import sys

from ..funcalg import CutoffOverflow
from .report import FORMATS, emit_report
from .runner import run_scenario
from .scenario import ScenarioError, bundled_scenarios, load_scenario, parse_conditions

log = logging.getLogger("orbitriple.verify")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="verify",
        description="Check the spectral triple conditions for a torus orbifold scenario.",
    )
    ap.add_argument("scenario", help="scenario YAML file, or the name of a bundled scenario")
    ap.add_argument("--grid", type=int, help="grid resolution per axis (>= 8)")
    ap.add_argument("--out", default=".", help="output directory (default: current)")
    ap.add_argument("--format", choices=FORMATS, default="json")
    ap.add_argument("--conditions", help="comma-separated conditions to check, or 'all'")
    ap.add_argument("--spectral-cutoff", type=float, dest="spectral_cutoff", help="eigenvalue cutoff for spectral counting")
    ap.add_argument("--seed", type=int)
    ap.add_argument("--list", action="store_true", help="list bundled scenarios and exit")
    ap.add_argument("-v", "--verbose", action="store_true")
    return ap


def main(argv=None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    if "--list" in argv:
        print("\n".join(bundled_scenarios()))
        return 0
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        scenario = load_scenario(args.scenario).with_overrides(
            grid=args.grid,
            conditions=parse_conditions(args.conditions) if args.conditions else None,
            spectral_cutoff=args.spectral_cutoff,
            seed=args.seed,
        )
        report = run_scenario(scenario)
        paths = emit_report(report, args.out, args.format)
    except (ScenarioError, CutoffOverflow) as exc:
        print(f"verify: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"verify: cannot write report: {exc}", file=sys.stderr)
        return 3
    for name, v in report.conditions.items():
        print(f"{name:14s} {v.verdict:12s} {v.witness!r}")
    print(f"orientability: {report.orientability}")
    for p in paths:
        print(f"wrote {p}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
