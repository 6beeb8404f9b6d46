#!/usr/bin/env python3
"""Consistency study: NMI as the worker sample size n grows at fixed
N=10,000, and as the total size N grows at fixed n=200."""

import argparse

from distsbm.bench import ExperimentSpec, run_example1


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--reps", type=int, default=20)
    ap.add_argument("--seed", type=int, default=12345)
    ap.add_argument("--out", default="bench_out")
    ap.add_argument("--no-plots", action="store_true")
    args = ap.parse_args()
    spec = ExperimentSpec(replications=args.reps, base_seed=args.seed,
                          out_dir=args.out, make_plots=not args.no_plots)
    run_example1(spec)
    print(f"wrote {args.out}/example1.csv")


if __name__ == "__main__":
    main()
