"""Run the three-phenomenon triad on the stock witness families.

Each family is paired with radii known to separate the phenomena; pass
--family to run a single one, --out-dir to keep the JSON reports.
"""

import argparse
import os

from coarsecycles import report
from coarsecycles.cli import cmd_triad
from coarsecycles.config import RunConfig
from coarsecycles.windows import FamilySpec

RUNS = {
    "line": RunConfig(
        FamilySpec.biinfinite_line(),
        window_radii=(4, 6, 8),
        rips_radii=(1,),
        max_length=6,
    ),
    "growing_chain": RunConfig(
        FamilySpec.growing_circuit_chain((4, 6, 8, 10, 12)),
        window_radii=(8, 10, 12),
        rips_radii=(1,),
        max_length=12,
    ),
    "triangulated_grid": RunConfig(
        FamilySpec.grid2d(triangulated=True),
        window_radii=(4, 6, 8),
        rips_radii=(1, 3),
        max_length=6,
    ),
    "untriangulated_grid": RunConfig(
        FamilySpec.grid2d(),
        window_radii=(4, 6, 8),
        rips_radii=(1, 2),
        max_length=6,
    ),
}


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--family", choices=sorted(RUNS), default=None)
    parser.add_argument("--out-dir", default=None)
    args = parser.parse_args()
    names = [args.family] if args.family else sorted(RUNS)
    for name in names:
        rep = cmd_triad(RUNS[name])
        verdict = rep["sections"]["triad"]["verdict"]
        print("{:20s} {}".format(name, verdict))
        if args.out_dir:
            os.makedirs(args.out_dir, exist_ok=True)
            path = os.path.join(args.out_dir, "triad_{}.json".format(name))
            report.write(rep, path)
            print("  wrote", path)


if __name__ == "__main__":
    main()
