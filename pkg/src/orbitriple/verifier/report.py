"""Serialize a ScenarioReport as JSON and the Gamma' grid field as CSV."""

from __future__ import annotations

import csv
import json
import math
from fractions import Fraction
from pathlib import Path

import numpy as np

from .runner import ScenarioReport

FORMATS = ("json", "csv", "both")


def _plain(obj):
    """Convert report values into JSON-native types with a fixed representation."""
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return [_plain(obj.real), _plain(obj.imag)]
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if not math.isfinite(x):
            return str(x)
        return x
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    return obj


def report_json(report: ScenarioReport) -> str:
    return json.dumps(_plain(report.to_dict()), sort_keys=True, indent=2) + "\n"


def write_field_csv(report: ScenarioReport, path: Path) -> int:
    """Write one row per grid point; returns the number of data rows."""
    p = report.dimension
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow([f"x{i + 1}" for i in range(p)] + ["norm"])
        for x, v in zip(report.field_points, report.field_norms.ravel()):
            w.writerow([repr(float(c)) for c in x] + [repr(float(v))])
    return len(report.field_norms.ravel())


def emit_report(report: ScenarioReport, out_dir, fmt: str = "json") -> list[Path]:
    if fmt not in FORMATS:
        raise ValueError(f"format must be one of {FORMATS}")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    if fmt in ("json", "both"):
        path = out / f"{report.scenario}.json"
        path.write_text(report_json(report), encoding="utf-8")
        written.append(path)
    if fmt in ("csv", "both"):
        path = out / f"{report.scenario}-field.csv"
        write_field_csv(report, path)
        written.append(path)
    return written
