"""Command line front end.

Subcommands: generate (window statistics), triad (three-phenomenon
verdict), tree-iso (path-basis round trips on tree windows), basis
(filtered cycle-space dimensions), expansion (isoperimetry and filling
probes).  Every run is driven by an INI config (see config.py for the
grammar) and emits one deterministic JSON report.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from typing import Optional

from . import report as report_mod
from .chains import Z, Z2
from .config import ConfigError, RunConfig, load_config, override
from .cyclespace import (
    CircuitCapExceeded,
    full_cycle_basis,
    cycle_space_dimension,
)
from .expansion import (
    ball_ratio_sweep,
    anchored_expansion,
    cheeger,
    triad_report,
    z2_norm_sweep,
    _canonical_probe_cycle,
)
from .windows import build_window

EXACT_CHEEGER_LIMIT = 18


def cmd_generate(config: RunConfig) -> dict:
    """Window statistics for each configured radius."""
    stats = {}
    for radius in config.window_radii:
        w = build_window(config.family, radius)
        stats[str(radius)] = {
            "vertices": len(w.vertices),
            "edges": len(w.edges),
            "max_degree": max(len(w.adj[v]) for v in w.vertices),
            "boundary_vertices": len(w.boundary_vertices),
        }
    return report_mod.make_report(config.echo(), "generate", {"windows": stats})


def cmd_triad(config: RunConfig) -> dict:
    """Full three-phenomenon evidence report across the configured radii."""
    probes = {
        "rips_radii": list(config.rips_radii),
        "probe_radius": config.probe_radius,
        "max_length": config.max_length,
        "circuit_cap": config.circuit_cap,
    }
    verdict = triad_report(config.family, list(config.window_radii), probes)
    return report_mod.make_report(config.echo(), "triad", {"triad": verdict})


def cmd_tree_iso(config: RunConfig, comb_teeth: Optional[int] = None) -> dict:
    """Round-trip statistics for the path basis of a tree-family window."""
    from .trees import TreeSpec, comb_counterexample_check, round_trip_report

    sections: dict = {}
    if config.family.name == "trivalent_tree":
        spec = TreeSpec(config.family.get("levels"))
        ray_len = max(config.window_radii)
        for ring in (Z, Z2):
            sections["round_trip_{}".format(ring)] = round_trip_report(
                spec,
                ray_len=ray_len,
                samples=config.samples,
                seed=config.seed,
                ring=ring,
            )
    elif comb_teeth is None:
        raise ConfigError(
            "tree-iso needs a trivalent_tree family or --comb"
        )
    if comb_teeth is not None:
        comb = comb_counterexample_check(comb_teeth)
        sections["comb"] = {
            "teeth": comb_teeth,
            "exact": comb["exact"],
            "failed_checks": comb["failed_checks"],
            "max_magnitude": comb["max_magnitude"],
            "odd_chain_magnitudes": comb["odd_chain_magnitudes"],
            "even_chain_magnitudes": comb["even_chain_magnitudes"],
        }
    return report_mod.make_report(config.echo(), "tree-iso", sections)


def cmd_basis(config: RunConfig) -> dict:
    """Filtered cycle-space dimensions per window radius."""
    tables = {}
    for radius in config.window_radii:
        w = build_window(config.family, radius)
        entry: dict = {"space_dimension": cycle_space_dimension(w)}
        try:
            basis = full_cycle_basis(
                w, max_length=config.max_length, cap=config.circuit_cap
            )
            entry["short_circuit_dimensions"] = {
                str(L): basis.dimension_at(L)
                for L in range(3, config.max_length + 1)
            }
            entry["capped"] = False
        except CircuitCapExceeded:
            entry["capped"] = True
        tables[str(radius)] = entry
    return report_mod.make_report(config.echo(), "basis", {"bases": tables})


def cmd_expansion(config: RunConfig) -> dict:
    """Cheeger quotients, ball ratios, and filling-norm sweeps per radius."""
    tables = {}
    for radius in config.window_radii:
        w = build_window(config.family, radius)
        mode = "exact" if len(w) <= EXACT_CHEEGER_LIMIT else "heuristic"
        value, witness = cheeger(w, mode)
        entry = {
            "cheeger": {
                "mode": mode,
                "value": value,
                "witness_size": len(witness),
            },
            "ball_ratios": {
                str(r): Fraction(cut, size)
                for r, (size, cut) in ball_ratio_sweep(w)
            },
        }
        anchored = anchored_expansion(w)
        if anchored is not None:
            entry["anchored_expansion"] = anchored[0]
        U = w.ball(w.seed_vertex, config.probe_radius)
        fprobe = _canonical_probe_cycle(w, U, 2 * config.probe_radius + 2)
        entry["probe_sweep"] = {
            "input_edges": len(fprobe),
            "rows": z2_norm_sweep(w, U, fprobe, config.rips_radii),
        }
        tables[str(radius)] = entry
    return report_mod.make_report(config.echo(), "expansion", {"expansion": tables})


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="coarsecycles",
        description="coarse cycle structure on finite graph windows",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("generate", "triad", "tree-iso", "basis", "expansion"):
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, help="INI config path")
        p.add_argument("--seed", type=int, default=None, help="override seed")
        p.add_argument("--out", default=None, help="override output path")
        p.add_argument(
            "--max-circuits",
            type=int,
            default=None,
            help="override circuit enumeration cap",
        )
        if name == "tree-iso":
            p.add_argument(
                "--comb",
                type=int,
                default=None,
                help="add the growth table for a comb with this many teeth",
            )
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = load_config(args.config)
        config = override(
            config,
            seed=args.seed,
            out=args.out,
            circuit_cap=args.max_circuits,
        )
        if args.command == "generate":
            rep = cmd_generate(config)
        elif args.command == "triad":
            rep = cmd_triad(config)
        elif args.command == "tree-iso":
            rep = cmd_tree_iso(config, comb_teeth=args.comb)
        elif args.command == "basis":
            rep = cmd_basis(config)
        else:
            rep = cmd_expansion(config)
    except ConfigError as exc:
        print("config error: {}".format(exc), file=sys.stderr)
        return 2
    text = report_mod.write(rep, config.out)
    if not config.out:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
