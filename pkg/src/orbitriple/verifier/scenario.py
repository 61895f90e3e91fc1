"""Scenario descriptions: YAML files naming a group, a chain and the checks to run."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Union

import yaml

from ..clifford import MAX_DIMENSION
from ..funcalg import DEFAULT_CUTOFF, HARD_CAP
from ..isometry import Isometry

CONDITIONS = (
    "cycle",
    "normalization",
    "orientability",
    "first-order",
    "closedness",
    "connectivity",
    "dimension",
)
CHAIN_KINDS = ("standard", "averaged-standard", "quotient")
_KNOWN_KEYS = {
    "name",
    "description",
    "dimension",
    "group",
    "cutoff",
    "chain",
    "grid",
    "seed",
    "battery",
    "battery_cutoff",
    "rays",
    "conditions",
    "spectral_cutoff",
    "samples",
}


class ScenarioError(ValueError):
    """The scenario file is malformed or inconsistent."""


@dataclass(frozen=True)
class RayParams:
    """Radii start * step**j for j = 0..count-1."""

    count: int = 14
    start: Fraction = Fraction(1, 8)
    step: Fraction = Fraction(1, 4)

    def radii(self) -> list[Fraction]:
        return [self.start * self.step**j for j in range(self.count)]


@dataclass(frozen=True)
class Scenario:
    name: str
    dimension: int
    generators: tuple[Isometry, ...]
    chain: Union[str, dict] = "averaged-standard"
    cutoff: int = DEFAULT_CUTOFF
    grid: int = 64
    seed: int = 0
    battery: int = 4
    battery_cutoff: int = 2
    rays: RayParams = field(default_factory=RayParams)
    conditions: tuple[str, ...] = CONDITIONS
    spectral_cutoff: float = 100.0
    samples: int = 10
    description: str = ""

    def __post_init__(self):
        validate(self)

    def with_overrides(self, **changes) -> "Scenario":
        changes = {k: v for k, v in changes.items() if v is not None}
        return replace(self, **changes)

    @property
    def chain_label(self) -> str:
        return self.chain if isinstance(self.chain, str) else "explicit"


def validate(s: Scenario) -> None:
    if not isinstance(s.dimension, int) or not 1 <= s.dimension <= MAX_DIMENSION:
        raise ScenarioError(f"dimension must be an integer in 1..{MAX_DIMENSION}")
    for g in s.generators:
        if g.p != s.dimension:
            raise ScenarioError("generator dimension does not match the scenario dimension")
    if isinstance(s.chain, str):
        if s.chain not in CHAIN_KINDS:
            raise ScenarioError(f"unknown chain {s.chain!r}; expected one of {CHAIN_KINDS} or an explicit literal")
    elif not isinstance(s.chain, dict) or "terms" not in s.chain:
        raise ScenarioError("explicit chain literals need a 'terms' list")
    if s.grid < 8:
        raise ScenarioError("grid resolution must be at least 8")
    if not 0 <= s.cutoff <= HARD_CAP or not 1 <= s.battery_cutoff <= HARD_CAP:
        raise ScenarioError(f"cutoffs must lie within the hard cap {HARD_CAP}")
    if s.battery < 0 or s.samples < 1:
        raise ScenarioError("battery must be >= 0 and samples >= 1")
    if s.rays.count < 1 or not 0 < s.rays.step < 1 or not 0 < s.rays.start < 1:
        raise ScenarioError("rays need count >= 1 and 0 < start, step < 1")
    unknown = [c for c in s.conditions if c not in CONDITIONS]
    if unknown:
        raise ScenarioError(f"unknown conditions {unknown}; expected names from {CONDITIONS}")
    if s.spectral_cutoff <= 0:
        raise ScenarioError("spectral cutoff must be positive")


def _fraction(x) -> Fraction:
    try:
        return Fraction(str(x))
    except (ValueError, ZeroDivisionError) as exc:
        raise ScenarioError(f"not a rational number: {x!r}") from exc


def parse_conditions(text) -> tuple[str, ...]:
    if isinstance(text, str):
        items = [c.strip() for c in text.split(",") if c.strip()]
    else:
        items = list(text)
    if items == ["all"]:
        return CONDITIONS
    return tuple(items)


def scenario_from_dict(data: dict) -> Scenario:
    if not isinstance(data, dict):
        raise ScenarioError("scenario must be a mapping")
    unknown = set(data) - _KNOWN_KEYS
    if unknown:
        raise ScenarioError(f"unknown scenario keys: {sorted(unknown)}")
    try:
        p = int(data["dimension"])
        name = str(data.get("name", "scenario"))
    except (KeyError, TypeError, ValueError) as exc:
        raise ScenarioError("scenario needs 'dimension'") from exc
    gens = []
    for g in (data.get("group") or {}).get("generators", []) or []:
        try:
            gens.append(Isometry(g["matrix"], [_fraction(t) for t in g.get("translation", [0] * p)]))
        except (KeyError, TypeError, ValueError) as exc:
            raise ScenarioError(f"bad generator {g!r}: {exc}") from exc
    rays = data.get("rays") or {}
    kwargs = dict(
        name=name,
        dimension=p,
        generators=tuple(gens),
        chain=data.get("chain", "averaged-standard"),
        cutoff=int(data.get("cutoff", DEFAULT_CUTOFF)),
        grid=int(data.get("grid", 64)),
        seed=int(data.get("seed", 0)),
        battery=int(data.get("battery", 4)),
        battery_cutoff=int(data.get("battery_cutoff", 2)),
        rays=RayParams(
            int(rays.get("count", RayParams.count)),
            _fraction(rays.get("start", RayParams.start)),
            _fraction(rays.get("step", RayParams.step)),
        ),
        conditions=parse_conditions(data.get("conditions", CONDITIONS)),
        spectral_cutoff=float(data.get("spectral_cutoff", 100.0)),
        samples=int(data.get("samples", 10)),
        description=str(data.get("description", "")),
    )
    return Scenario(**kwargs)


def bundled_scenarios() -> list[str]:
    root = resources.files("orbitriple.verifier") / "scenarios"
    return sorted(p.name[: -len(".yaml")] for p in root.iterdir() if p.name.endswith(".yaml"))


def load_scenario(source: Union[str, Path]) -> Scenario:
    """Load a scenario from a YAML path, or by the name of a bundled scenario."""
    path = Path(source)
    if path.is_file():
        text = path.read_text(encoding="utf-8")
    else:
        bundled = resources.files("orbitriple.verifier") / "scenarios" / f"{source}.yaml"
        if not bundled.is_file():
            raise ScenarioError(f"no scenario file or bundled scenario named {source!r}")
        text = bundled.read_text(encoding="utf-8")
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ScenarioError(f"could not parse scenario: {exc}") from exc
    return scenario_from_dict(data)
