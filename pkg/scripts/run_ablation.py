#!/usr/bin/env python3
"""Ablation: block-wise vs subnetwork-only splitting crossed with one-shot
vs multi-round communication, scored by relative edge density and NMI."""

import argparse

from distsbm.bench import ExperimentSpec, run_ablation


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--reps", type=int, default=20)
    ap.add_argument("--seed", type=int, default=12345)
    ap.add_argument("--out", default="bench_out")
    ap.add_argument("--n-nodes", type=int, default=4000)
    ap.add_argument("--worker-size", type=int, default=400)
    args = ap.parse_args()
    spec = ExperimentSpec(replications=args.reps, base_seed=args.seed,
                          out_dir=args.out, make_plots=False)
    run_ablation(spec, N=args.n_nodes, n=args.worker_size)
    print(f"wrote {args.out}/ablation.csv")


if __name__ == "__main__":
    main()
