"""Run the condition battery for a scenario and assemble the report."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ..funcalg import differential_kernel, grid_points, random_invariant
from ..hochschild import (
    HochschildChain,
    average_chain,
    boundary,
    closedness_integral,
    entries_invariant,
    first_order_check,
    gamma_prime_norms,
    is_cycle,
    normalization_deviation,
    quotient_torus_cycle,
    random_invariant_cycle,
    standard_torus_cycle,
)
from ..isometry import FiniteIsometryGroup, FixedComponent, FixedLocus, generate_group, lift_table, singular_locus
from ..spectral import dimension_probe
from .scenario import CONDITIONS, RayParams, Scenario, ScenarioError

log = logging.getLogger(__name__)

PASS, FAIL, NOT_CHECKED = "PASS", "FAIL", "NOT-CHECKED"

ZERO_TOL = 1e-10  # exact-zero claims in the floating tower
SINGULAR_TOL = 1e-8  # orientability FAIL threshold on singular samples
REFERENCE_MIN = 1e-2  # a non-degenerate reference chain must reach this grid max
EXPONENT_TOL = 0.15


@dataclass(frozen=True)
class Verdict:
    verdict: str
    witness: Optional[float] = None
    note: Optional[str] = None

    def to_dict(self) -> dict:
        return {"verdict": self.verdict, "witness": self.witness, "note": self.note}


@dataclass
class ScenarioReport:
    scenario: str
    dimension: int
    seed: int
    grid: int
    group_order: int
    free: bool
    group: dict
    singular_locus: dict
    chain: dict
    conditions: dict
    gamma_prime: dict
    spectral: Optional[dict]
    orientability: str
    field_points: np.ndarray = field(repr=False, default=None)
    field_norms: np.ndarray = field(repr=False, default=None)

    def to_dict(self) -> dict:
        return {
            "scenario": self.scenario,
            "dimension": self.dimension,
            "seed": self.seed,
            "grid": self.grid,
            "group": self.group,
            "group_order": self.group_order,
            "free": self.free,
            "singular_locus": self.singular_locus,
            "chain": self.chain,
            "conditions": {k: v.to_dict() for k, v in self.conditions.items()},
            "gamma_prime": self.gamma_prime,
            "spectral": self.spectral,
            "orientability": self.orientability,
        }


def _f(x) -> float:
    return float(x)


def _pt(x) -> list[str]:
    return [str(c) for c in x]


def ray_sweep(chain: HochschildChain, component: FixedComponent, params: RayParams = RayParams()) -> list[tuple[float, float]]:
    """||Gamma'|| at base + r n for a unit normal n and the geometric radii of ``params``."""
    base = np.array([float(c) for c in component.base])
    n = component.normal()
    radii = [float(r) for r in params.radii()]
    pts = np.array([base + r * n for r in radii])
    norms = gamma_prime_norms(chain, pts)
    return [(r, _f(v)) for r, v in zip(radii, norms)]


def unit_battery(group: FiniteIsometryGroup, count: int, cutoff: int, rng: np.random.Generator, grid: int) -> list[HochschildChain]:
    """Random invariant cycles rescaled so that max ||Gamma'|| over the grid is 1.

    The zero thresholds are absolute, so reference chains are brought to unit scale first.
    """
    out = []
    while len(out) < count:
        c = random_invariant_cycle(group, cutoff, rng)
        top = float(gamma_prime_norms(c, grid=grid).max())
        if top > 0:
            out.append(c.scale(1.0 / top))
    return out


def build_chain(s: Scenario, group: FiniteIsometryGroup) -> HochschildChain:
    p = s.dimension
    if isinstance(s.chain, dict):
        return HochschildChain.from_literal(p, s.chain)
    if s.chain == "standard":
        return standard_torus_cycle(p)
    if s.chain == "averaged-standard":
        return average_chain(standard_torus_cycle(p), group)
    try:
        return quotient_torus_cycle(group)
    except ValueError as exc:
        raise ScenarioError(f"quotient chain unavailable: {exc}") from exc


def _chain_stats(chain: HochschildChain, s: Scenario, locus: FixedLocus, samples) -> tuple[dict, np.ndarray]:
    norms = gamma_prime_norms(chain, grid=s.grid)
    if samples:
        pts = np.array([[float(c) for c in x] for x in samples])
        sing = gamma_prime_norms(chain, pts)
    else:
        sing = np.zeros(0)
    stats = {
        "grid_min": _f(norms.min()),
        "grid_max": _f(norms.max()),
        "singular_min": _f(sing.min()) if sing.size else None,
        "singular_max": _f(sing.max()) if sing.size else None,
        "rays": [
            {
                "component": i,
                "base": _pt(comp.base),
                "direction": [_f(v) for v in comp.normal()],
                "table": [[r, v] for r, v in ray_sweep(chain, comp, s.rays)],
            }
            for i, comp in enumerate(locus.components)
        ],
    }
    return stats, norms


def run_scenario(s: Scenario) -> ScenarioReport:
    p = s.dimension
    rng = np.random.default_rng(s.seed)
    wanted = set(s.conditions)

    group = generate_group(list(s.generators), p=p)
    locus = singular_locus(group)
    free = locus.is_empty
    log.info("group of order %d, %d singular components", group.order, len(locus))

    chain = build_chain(s, group)
    cycle = is_cycle(chain) if chain.degree >= 1 else False
    invariant = entries_invariant(chain, group)
    deviation = normalization_deviation(chain, grid=s.grid)

    samples = locus.sample_points(8)
    main_stats, field_norms = _chain_stats(chain, s, locus, samples)
    battery = unit_battery(group, s.battery, s.battery_cutoff, rng, s.grid)
    battery_stats = [_chain_stats(c, s, locus, samples)[0] for c in battery]
    all_stats = [main_stats] + battery_stats
    reference = max(st["grid_max"] for st in all_stats)
    singular_values = [
        {"point": _pt(x), "norm": _f(v)}
        for x, v in zip(samples, gamma_prime_norms(chain, np.array([[float(c) for c in x] for x in samples])) if samples else [])
    ]
    gamma_prime = {
        "chain": main_stats,
        "battery": battery_stats,
        "reference_grid_max": reference,
        "singular_samples": singular_values,
        "singular_max_all": max((st["singular_max"] for st in all_stats), default=None) if samples else None,
    }

    conditions: dict[str, Verdict] = {}

    def record(name, verdict_fn):
        if name in wanted:
            conditions[name] = verdict_fn()
        else:
            conditions[name] = Verdict(NOT_CHECKED, None, "not requested")

    record("cycle", lambda: Verdict(PASS if cycle else FAIL, _boundary_size(chain), "largest coefficient of b(c)"))
    record(
        "normalization",
        lambda: Verdict(PASS if deviation <= ZERO_TOL else FAIL, deviation, "max |pi_D(c)(x) - Gamma| over the grid"),
    )
    record("first-order", lambda: _first_order(group, s, rng))
    record("closedness", lambda: _closedness(chain, group, s, rng))
    record("connectivity", lambda: _connectivity(group, s))

    spectral = None
    if "dimension" in wanted:
        verdict, spectral = _dimension(group, s)
        conditions["dimension"] = verdict
    else:
        conditions["dimension"] = Verdict(NOT_CHECKED, None, "not requested")

    orient = _orientability(chain, group, s, free, cycle, invariant, deviation, main_stats, reference)
    conditions["orientability"] = orient if "orientability" in wanted else Verdict(NOT_CHECKED, None, "not requested")

    return ScenarioReport(
        scenario=s.name,
        dimension=p,
        seed=s.seed,
        grid=s.grid,
        group_order=group.order,
        free=free,
        group={"generators": [g.to_dict() for g in s.generators], "elements": [h.to_dict() for h in group.elements]},
        singular_locus={
            "component_count": len(locus),
            "dimensions": locus.dimensions,
            "components": [c.to_dict() for c in locus.components],
        },
        chain={
            "spec": s.chain_label,
            "terms": len(chain.terms),
            "twopi_power": chain.twopi_power,
            "is_cycle": cycle,
            "entries_invariant": invariant,
            "normalization_constant": None
            if chain.normalization is None
            else [_f(chain.normalization.real), _f(chain.normalization.imag)],
            "normalization_deviation": deviation,
        },
        conditions={k: conditions[k] for k in CONDITIONS},
        gamma_prime=gamma_prime,
        spectral=spectral,
        orientability=conditions["orientability"].verdict,
        field_points=grid_points(s.grid, p),
        field_norms=field_norms,
    )


def _boundary_size(chain: HochschildChain) -> float:
    if chain.degree < 1:
        return float("nan")
    bc = boundary(chain)
    return max((abs(complex(v)) for t in bc.terms for f in t for v in f.coefficients.values()), default=0.0)


def _first_order(group, s, rng) -> Verdict:
    worst = 0.0
    for _ in range(s.samples):
        a = random_invariant(group, s.battery_cutoff, rng)
        b = random_invariant(group, s.battery_cutoff, rng)
        pts = rng.random((s.samples, s.dimension))
        worst = max(worst, first_order_check(a, b, pts))
    return Verdict(PASS if worst == 0.0 else FAIL, worst, "max |[[D,a],b](x)| over random invariant pairs")


def _closedness(chain, group, s, rng) -> Verdict:
    grid = 32 if s.dimension <= 3 else 12
    tuples = [t[1:] for t in chain.terms if len(t) - 1 == s.dimension]
    tuples += [[random_invariant(group, s.battery_cutoff, rng) for _ in range(s.dimension)] for _ in range(s.samples)]
    worst = max((abs(closedness_integral(t, grid)) for t in tuples), default=0.0)
    return Verdict(PASS if worst <= ZERO_TOL else FAIL, worst, f"max |grid-{grid} integral| over chain and random invariant tuples")


def _connectivity(group, s) -> Verdict:
    dim = len(differential_kernel(group, s.cutoff))
    return Verdict(PASS if dim == 1 else FAIL, float(dim), f"dimension of ker d on invariants at cutoff {s.cutoff}")


def _dimension(group, s) -> tuple[Verdict, Optional[dict]]:
    lam = s.spectral_cutoff
    cutoffs = [lam / 4, lam / 2, 3 * lam / 4, lam]
    try:
        lift = lift_table(group)
        reports = dimension_probe(lift, cutoffs)
    except (ValueError, ArithmeticError) as exc:
        return Verdict(NOT_CHECKED, None, f"spectral counting unavailable: {exc}"), None
    exponent = reports[-1].exponent
    spectral = {
        "lift": lift.kind,
        "sign_cocycle_trivial": lift.sign_trivial,
        "counts": [
            {"cutoff": r.cutoff, "total": r.total, "invariant": r.invariant, "ratio": r.ratio} for r in reports
        ],
        "exponent": exponent,
        "ratio_times_order": reports[-1].ratio * group.order,
        "note": "heuristic evidence",
    }
    ok = abs(exponent - s.dimension) <= EXPONENT_TOL
    return Verdict(PASS if ok else FAIL, exponent, "Weyl-law exponent of the invariant count (heuristic evidence)"), spectral


def _orientability(chain, group, s, free, cycle, invariant, deviation, stats, reference) -> Verdict:
    if free:
        witness, label = None, None
        if cycle and invariant and deviation <= ZERO_TOL:
            witness, label = deviation, "scenario chain"
        else:
            try:
                q = quotient_torus_cycle(group)
            except ValueError as exc:
                return Verdict(NOT_CHECKED, None, f"free action but no verified orientation cycle: {exc}")
            dev = normalization_deviation(q, grid=s.grid)
            if is_cycle(q) and entries_invariant(q, group) and dev <= ZERO_TOL:
                witness, label = dev, "quotient cycle"
        if witness is None:
            return Verdict(NOT_CHECKED, None, "free action but no verified orientation cycle")
        return Verdict(PASS, witness, f"{label} is an invariant cycle with pi_D = Gamma (max deviation)")
    if not cycle:
        return Verdict(NOT_CHECKED, None, "scenario chain is not a Hochschild cycle")
    if not invariant:
        return Verdict(NOT_CHECKED, None, "scenario chain entries are not G-invariant")
    smin = stats["singular_min"]
    if smin is None or smin > SINGULAR_TOL:
        return Verdict(NOT_CHECKED, smin, "Gamma' does not vanish on the singular samples")
    if reference < REFERENCE_MIN:
        return Verdict(NOT_CHECKED, smin, "no non-degenerate reference chain on the grid")
    return Verdict(FAIL, smin, "min ||Gamma'|| over singular samples; Gamma' must be nowhere vanishing")
