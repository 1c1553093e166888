"""Round-trip statistics for tree path bases, plus the comb growth table.

Runs both coefficient rings over a ladder of branch layouts and prints the
comb family's recovered-coefficient magnitudes, which keep growing with the
tooth count even though every individual system solves exactly.
"""

import argparse

from coarsecycles.chains import Z, Z2
from coarsecycles.trees import (
    TreeSpec,
    comb_counterexample_check,
    round_trip_report,
)

LAYOUTS = {
    "single_branch": TreeSpec(((1,),)),
    "three_teeth": TreeSpec.comb(3),
    "two_level": TreeSpec(((-2, 1), ((1, 2), (1,)))),
    "three_level": TreeSpec(((1,), ((2,),), ((1,),))),
    "four_level": TreeSpec(((1,), ((1,),), ((1,),), ((1,),))),
}


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--samples", type=int, default=100)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--ray-len", type=int, default=6)
    parser.add_argument("--teeth", type=int, nargs="*", default=[8, 12, 16, 20])
    args = parser.parse_args()

    for name, spec in LAYOUTS.items():
        for ring in (Z, Z2):
            rr = round_trip_report(
                spec,
                ray_len=args.ray_len,
                samples=args.samples,
                seed=args.seed,
                ring=ring,
            )
            print(
                "{:14s} {:2s} paths={:2d} exact={}/{} ratio={}".format(
                    name,
                    ring,
                    rr["paths"],
                    rr["exact_round_trips"],
                    args.samples,
                    rr["worst_norm_ratio"],
                )
            )

    print()
    print("comb growth (teeth -> max recovered magnitude):")
    for n in args.teeth:
        cc = comb_counterexample_check(n)
        print(
            "  {:3d} -> {:3d}  exact={} failing: {}".format(
                n, cc["max_magnitude"], cc["exact"], ", ".join(cc["failed_checks"])
            )
        )


if __name__ == "__main__":
    main()
