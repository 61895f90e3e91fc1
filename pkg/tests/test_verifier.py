import csv
import json
from fractions import Fraction as F

import numpy as np
import pytest

from orbitriple.hochschild import average_chain, gamma_prime_norms, quotient_torus_cycle, standard_torus_cycle
from orbitriple.isometry import FixedComponent, generate_group, rotation_quarter, translation
from orbitriple.verifier import (
    CONDITIONS,
    FAIL,
    NOT_CHECKED,
    PASS,
    RayParams,
    ScenarioError,
    bundled_scenarios,
    emit_report,
    load_scenario,
    ray_sweep,
    report_json,
    run_scenario,
    scenario_from_dict,
)
from orbitriple.verifier.cli import main
from orbitriple.verifier.runner import unit_battery

BUNDLED = [
    "t1-trivial",
    "t2-free-translation",
    "t2-trivial",
    "t2-z2-point",
    "t2-z2-reflection",
    "t2-z4-rotation",
    "t3-z2-reflection",
]
NONFREE = ["t2-z2-point", "t2-z2-reflection", "t2-z4-rotation", "t3-z2-reflection"]


@pytest.fixture(scope="module")
def reports():
    return {name: run_scenario(load_scenario(name)) for name in BUNDLED}


def test_bundled_list():
    assert bundled_scenarios() == BUNDLED


def test_scenario_validation():
    with pytest.raises(ScenarioError):
        scenario_from_dict({"dimension": 2, "grid": 4})
    with pytest.raises(ScenarioError):
        scenario_from_dict({"dimension": 5})
    with pytest.raises(ScenarioError):
        scenario_from_dict({"dimension": 2, "chain": "nonsense"})
    with pytest.raises(ScenarioError):
        scenario_from_dict({"dimension": 2, "conditions": ["cycle", "bogus"]})
    with pytest.raises(ScenarioError):
        scenario_from_dict({"dimension": 2, "colour": "red"})
    with pytest.raises(ScenarioError):
        scenario_from_dict({"dimension": 2, "group": {"generators": [{"matrix": [[1, 1], [0, 1]]}]}})
    with pytest.raises(ScenarioError):
        load_scenario("no-such-scenario")


def test_report_fields(reports):
    for name, r in reports.items():
        d = r.to_dict()
        assert set(d["conditions"]) == set(CONDITIONS)
        for v in d["conditions"].values():
            assert v["verdict"] in (PASS, FAIL, NOT_CHECKED)
        assert d["group_order"] == len(d["group"]["elements"])
        assert d["singular_locus"]["component_count"] == len(d["singular_locus"]["dimensions"])
        assert d["spectral"]["note"] == "heuristic evidence"


def test_z4_scenario(reports):
    r = reports["t2-z4-rotation"]
    assert r.orientability == FAIL
    assert r.group_order == 4 and not r.free
    samples = r.gamma_prime["singular_samples"]
    assert len(samples) == 4 and all(s["norm"] <= 1e-10 for s in samples)
    assert r.gamma_prime["reference_grid_max"] > 0.1


def test_free_scenario(reports):
    r = reports["t2-free-translation"]
    assert r.orientability == PASS and r.free
    assert r.chain["is_cycle"] and r.chain["entries_invariant"]
    assert r.chain["normalization_deviation"] <= 1e-12


def test_reflection_scenario_rays(reports):
    r = reports["t2-z2-reflection"]
    assert r.orientability == FAIL
    assert r.singular_locus["dimensions"] == [1, 1]
    stats = r.gamma_prime["chain"]
    for ray in stats["rays"]:
        norms = [v for _, v in ray["table"]]
        assert all(a > b for a, b in zip(norms[-6:], norms[-5:]))


@pytest.mark.parametrize("name", NONFREE)
def test_ray_contract(name, reports):
    g = reports[name].gamma_prime
    for st in [g["chain"]] + g["battery"]:
        for ray in st["rays"]:
            assert ray["table"][-1][1] <= 1e-6 * st["grid_max"] or st["grid_max"] == 0


def test_ray_sweep_examples():
    g = generate_group([rotation_quarter()])
    rng = np.random.default_rng(3)
    (c,) = unit_battery(g, 1, 2, rng, 64)
    top = gamma_prime_norms(c, grid=64).max()
    table = ray_sweep(c, FixedComponent((0, 0)), RayParams(8, F(1, 8), F(1, 2)))
    assert [r for r, _ in table] == [2.0**-j for j in range(3, 11)]
    assert all(a > b for (_, a), (_, b) in zip(table, table[1:]))
    assert table[-1][1] < 1e-6 * top
    assert gamma_prime_norms(c, np.zeros((1, 2)))[0] <= 1e-10


def test_ray_sweep_free_scenario_bounded_below():
    g = generate_group([translation(["1/2", "1/2"])])
    c = quotient_torus_cycle(g)
    top = gamma_prime_norms(c, grid=64).max()
    for _, v in ray_sweep(c, FixedComponent((0, 0))):
        assert v >= 0.5 * top


def test_verdict_soundness(reports):
    for r in reports.values():
        d = r.to_dict()
        g = d["gamma_prime"]
        if d["orientability"] == FAIL:
            assert d["chain"]["entries_invariant"] and d["chain"]["is_cycle"]
            assert g["chain"]["singular_min"] <= 1e-8 < 1e-2 <= g["reference_grid_max"]
        if d["orientability"] == PASS:
            assert d["chain"]["is_cycle"] and d["chain"]["entries_invariant"]
            assert d["chain"]["normalization_deviation"] <= 1e-10


def test_explicit_non_cycle_is_not_checked():
    g = generate_group([rotation_quarter()])
    u = {"frequency": [1, 0], "coefficient": ["1", "0"]}
    lit = {"terms": [[[u], [u]]]}  # a 1-chain u (x) u in dimension 2
    s = scenario_from_dict(
        {
            "name": "explicit",
            "dimension": 2,
            "group": {"generators": [{"matrix": [[0, -1], [1, 0]], "translation": [0, 0]}]},
            "chain": lit,
            "conditions": ["cycle", "orientability"],
            "battery": 1,
        }
    )
    r = run_scenario(s)
    assert r.conditions["orientability"].verdict == NOT_CHECKED
    assert r.conditions["dimension"].note == "not requested"
    assert g.order == 4


def test_averaged_chain_matches_report(reports):
    g = generate_group([rotation_quarter()])
    assert average_chain(standard_torus_cycle(2), g).is_zero
    assert reports["t2-z4-rotation"].chain["terms"] == 0


def test_json_is_valid_and_typed(reports, tmp_path):
    (path,) = emit_report(reports["t2-z2-reflection"], tmp_path, "json")
    d = json.loads(path.read_text())
    assert d["scenario"] == "t2-z2-reflection"
    assert isinstance(d["conditions"]["cycle"]["witness"], float)
    assert d["singular_locus"]["components"][1]["base"] == ["0", "1/2"]


def test_csv_rows(reports, tmp_path):
    paths = emit_report(reports["t2-z4-rotation"], tmp_path, "both")
    csv_path = [p for p in paths if p.suffix == ".csv"][0]
    rows = list(csv.reader(csv_path.open()))
    assert rows[0] == ["x1", "x2", "norm"]
    assert len(rows) == 4096 + 1


def test_determinism(tmp_path):
    a = report_json(run_scenario(load_scenario("t2-z2-point")))
    b = report_json(run_scenario(load_scenario("t2-z2-point")))
    assert a == b


def test_cli(tmp_path, capsys):
    assert main(["t2-z4-rotation", "--out", str(tmp_path), "--grid", "16", "--conditions", "cycle,orientability"]) == 0
    out = capsys.readouterr().out
    assert "orientability: FAIL" in out
    d = json.loads((tmp_path / "t2-z4-rotation.json").read_text())
    assert d["grid"] == 16
    assert d["conditions"]["dimension"]["verdict"] == NOT_CHECKED
    assert main(["nonexistent-scenario", "--out", str(tmp_path)]) == 2
    assert main(["--list"]) == 0


def test_cli_accepts_scenario_file(tmp_path):
    f = tmp_path / "s.yaml"
    f.write_text("name: custom\ndimension: 1\nchain: standard\ngrid: 8\nspectral_cutoff: 60\n")
    assert main([str(f), "--out", str(tmp_path), "--format", "csv"]) == 0
    assert (tmp_path / "custom-field.csv").exists()
