"""Scenario-driven verification of the spectral triple conditions."""

from .report import emit_report, report_json
from .runner import FAIL, NOT_CHECKED, PASS, ScenarioReport, Verdict, ray_sweep, run_scenario
from .scenario import (
    CONDITIONS,
    RayParams,
    Scenario,
    ScenarioError,
    bundled_scenarios,
    load_scenario,
    scenario_from_dict,
)

__all__ = [
    "CONDITIONS",
    "FAIL",
    "NOT_CHECKED",
    "PASS",
    "RayParams",
    "Scenario",
    "ScenarioError",
    "ScenarioReport",
    "Verdict",
    "bundled_scenarios",
    "emit_report",
    "load_scenario",
    "ray_sweep",
    "report_json",
    "run_scenario",
    "scenario_from_dict",
]
