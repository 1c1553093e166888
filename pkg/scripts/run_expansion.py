"""Isoperimetric profile and filling-norm sweep for one graph family.

Prints Cheeger quotients (exact when the window is small enough), ball
boundary ratios, and the mod-2 filling-norm sweep for the canonical probe
cycle at each window radius.
"""

import argparse

from coarsecycles import report
from coarsecycles.cli import cmd_expansion
from coarsecycles.config import RunConfig
from coarsecycles.windows import FamilySpec

FAMILIES = {
    "grid": lambda: FamilySpec.grid2d(),
    "triangulated_grid": lambda: FamilySpec.grid2d(triangulated=True),
    "line": FamilySpec.biinfinite_line,
    "ladder": FamilySpec.ladder,
    "comb": FamilySpec.biinfinite_comb,
    "tree": FamilySpec.regular3_tree,
    "free_group": lambda: FamilySpec.cayley_free(2),
}


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--family", choices=sorted(FAMILIES), default="grid")
    parser.add_argument("--radii", type=int, nargs="*", default=[3, 4, 5])
    parser.add_argument("--rips", type=int, nargs="*", default=[1, 2])
    parser.add_argument("--out", default=None)
    args = parser.parse_args()

    cfg = RunConfig(
        FAMILIES[args.family](),
        window_radii=tuple(args.radii),
        rips_radii=tuple(args.rips),
    )
    rep = cmd_expansion(cfg)
    tables = rep["sections"]["expansion"]
    for radius in sorted(tables, key=int):
        entry = tables[radius]
        ch = entry["cheeger"]
        print(
            "radius {:>2s}: cheeger {} ({}, cut of {} vertices)".format(
                radius, ch["value"], ch["mode"], ch["witness_size"]
            )
        )
        if "anchored_expansion" in entry:
            print("           anchored {}".format(entry["anchored_expansion"]))
        sweep = entry["probe_sweep"]
        marks = [
            "r{}:{}".format(row["radius"], row["norm"] if row["feasible"] else "-")
            for row in sweep["rows"]
        ]
        print(
            "           probe ({} edges) norms {}".format(
                sweep["input_edges"], "  ".join(marks)
            )
        )
    if args.out:
        report.write(rep, args.out)
        print("wrote", args.out)


if __name__ == "__main__":
    main()
