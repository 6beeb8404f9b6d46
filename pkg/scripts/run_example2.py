#!/usr/bin/env python3
"""Signal-strength study: NMI against the edge density rho and the
block-separation level beta at N=10,000, n=500."""

import argparse

from distsbm.bench import ExperimentSpec, run_example2


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--reps", type=int, default=20)
    ap.add_argument("--seed", type=int, default=12345)
    ap.add_argument("--out", default="bench_out")
    ap.add_argument("--no-plots", action="store_true")
    args = ap.parse_args()
    spec = ExperimentSpec(replications=args.reps, base_seed=args.seed,
                          out_dir=args.out, make_plots=not args.no_plots)
    run_example2(spec)
    print(f"wrote {args.out}/example2.csv")


if __name__ == "__main__":
    main()
