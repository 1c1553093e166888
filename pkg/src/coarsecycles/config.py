"""Run configuration: an INI file with [family] and [run] sections.

    [family]
    name = grid2d          ; family name, see FamilySpec constructors
    triangulated = true    ; family-specific keys follow the constructor args
    [run]
    window_radii = 4,6,8
    rips_radii = 1,2
    margin = 1
    samples = 25
    seed = 7
    circuit_cap = 200000
    max_length = 8
    probe_radius = 2
    out = report.json      ; optional, stdout when absent

Integer lists are comma-separated.  The trivalent_tree family takes a
`levels` key holding JSON: the first entry is the list of spine branch
positions, each later entry lists one positive-position list per ray of
that depth, e.g. levels = [[-2, 1], [[1, 2], [1]]].
"""

from __future__ import annotations

import configparser
import json
from dataclasses import dataclass, field, replace
from typing import Optional, Tuple

from .windows import FamilySpec, UnknownFamilyError


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    family: FamilySpec
    window_radii: Tuple[int, ...] = (4, 6, 8)
    rips_radii: Tuple[int, ...] = (1, 2)
    margin: int = 1
    samples: int = 25
    seed: int = 0
    circuit_cap: int = 200000
    max_length: int = 8
    probe_radius: int = 2
    out: Optional[str] = None

    def __post_init__(self):
        if not self.window_radii:
            raise ConfigError("window_radii must not be empty")
        if any(r <= 0 for r in self.window_radii):
            raise ConfigError("window radii must be positive")
        if any(r <= 0 for r in self.rips_radii):
            raise ConfigError("Rips radii must be positive")
        if not 0 < self.margin < min(self.window_radii):
            raise ConfigError("margin must sit strictly between 0 and the radii")
        if self.samples < 0 or self.seed < 0:
            raise ConfigError("samples and seed must be non-negative")
        if self.circuit_cap <= 0 or self.max_length < 3:
            raise ConfigError("circuit_cap must be positive, max_length >= 3")

    def echo(self) -> dict:
        return {
            "family": self.family.describe(),
            "window_radii": list(self.window_radii),
            "rips_radii": list(self.rips_radii),
            "margin": self.margin,
            "samples": self.samples,
            "seed": self.seed,
            "circuit_cap": self.circuit_cap,
            "max_length": self.max_length,
            "probe_radius": self.probe_radius,
        }


def _int_list(raw: str) -> Tuple[int, ...]:
    return tuple(int(part.strip()) for part in raw.split(",") if part.strip())


def _family_from_section(section) -> FamilySpec:
    name = section.get("name")
    if not name:
        raise ConfigError("[family] needs a name")
    if name == "grid2d":
        return FamilySpec.grid2d(section.getboolean("triangulated", False))
    if name == "cayley_free":
        return FamilySpec.cayley_free(section.getint("k", 2))
    if name == "biinfinite_line":
        return FamilySpec.biinfinite_line()
    if name == "biinfinite_comb":
        return FamilySpec.biinfinite_comb()
    if name == "ladder":
        return FamilySpec.ladder()
    if name == "cycle":
        return FamilySpec.cycle(section.getint("n", 6))
    if name == "growing_circuit_chain":
        raw = section.get("lengths", "4,6,8")
        return FamilySpec.growing_circuit_chain(_int_list(raw))
    if name == "regular3_tree":
        return FamilySpec.regular3_tree()
    if name == "trivalent_tree":
        raw = section.get("levels")
        if raw is None:
            raise ConfigError("trivalent_tree needs a levels key")
        try:
            levels = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise ConfigError("levels is not valid JSON: {}".format(exc))
        from .trees import TreeSpec

        packed = [tuple(levels[0])] + [
            tuple(tuple(ray) for ray in lvl) for lvl in levels[1:]
        ]
        return FamilySpec.trivalent_tree(TreeSpec(tuple(packed)))
    raise ConfigError("unknown family {!r}".format(name))


def load_config(path: str) -> RunConfig:
    parser = configparser.ConfigParser()
    read = parser.read(path)
    if not read:
        raise ConfigError("cannot read config file {!r}".format(path))
    if "family" not in parser:
        raise ConfigError("config needs a [family] section")
    family = _family_from_section(parser["family"])
    run = parser["run"] if "run" in parser else {}

    def geti(key, default):
        return int(run.get(key, default))

    kwargs = dict(
        family=family,
        margin=geti("margin", 1),
        samples=geti("samples", 25),
        seed=geti("seed", 0),
        circuit_cap=geti("circuit_cap", 200000),
        max_length=geti("max_length", 8),
        probe_radius=geti("probe_radius", 2),
        out=run.get("out") or None,
    )
    if "window_radii" in run:
        kwargs["window_radii"] = _int_list(run["window_radii"])
    if "rips_radii" in run:
        kwargs["rips_radii"] = _int_list(run["rips_radii"])
    try:
        return RunConfig(**kwargs)
    except UnknownFamilyError as exc:
        raise ConfigError(str(exc))


def override(config: RunConfig, **kwargs) -> RunConfig:
    """Config with the given fields replaced (None values are ignored)."""
    updates = {k: v for k, v in kwargs.items() if v is not None}
    return replace(config, **updates) if updates else config
