"""Command-line interface: generate / split / fit / select-k / eval / bench."""

from __future__ import annotations

import argparse
import logging
import sys

import numpy as np

from . import bench
from .generators import DcsbmConfig, SbmConfig, generate_dcsbm, generate_sbm, make_planted_theta
from .graph import load_edge_list, write_edge_list
from .io import read_labels, write_labels, write_params
from .metrics import nmi, red
from .partition import block_split, write_partition_file
from .runtime import FitConfig, run_dcpl, run_dpl
from .selection import SelectionConfig, select_k, write_score_table

log = logging.getLogger(__name__)


def _parse_floats(text: str) -> np.ndarray:
    return np.array([float(x) for x in text.split(",")])


def cmd_generate(args) -> int:
    pi = _parse_floats(args.pi)
    K = pi.size
    theta = make_planted_theta(args.rho, args.beta, K)
    base = SbmConfig(args.n_nodes, K, pi, theta, seed=args.seed)
    if args.model == "sbm":
        net = generate_sbm(base)
    else:
        net = generate_dcsbm(DcsbmConfig(base=base, heterogeneity=args.m))
    write_edge_list(net.graph, args.edges)
    write_labels(net.truth, args.truth)
    print(f"wrote {net.graph.num_nodes} nodes, {net.graph.num_edges} edges "
          f"-> {args.edges}; truth -> {args.truth}")
    return 0


def cmd_split(args) -> int:
    loaded = load_edge_list(args.edges)
    imap, _ = block_split(loaded.graph, args.workers, args.seed)
    write_partition_file(imap, args.seed, args.out)
    print(f"split N={loaded.graph.num_nodes} into R={args.workers} blocks -> {args.out}")
    return 0


def _fit_config(args) -> FitConfig:
    init = args.init
    init_labels = None
    if init == "file":
        _, init_labels = read_labels(args.init_file)
    return FitConfig(num_workers=args.workers, seed=args.seed, init=init,
                     init_labels=init_labels, outer_tol=args.tol,
                     max_rounds=args.max_rounds)


def cmd_fit(args) -> int:
    loaded = load_edge_list(args.edges)
    cfg = _fit_config(args)
    runner = run_dpl if args.model == "sbm" else run_dcpl
    result = runner(loaded.graph, args.k, cfg)
    write_labels(result.labels, args.labels, original_ids=loaded.original_ids)
    if args.params:
        write_params(result.params, args.params)
    if args.ledger:
        result.ledger.write_csv(args.ledger)
    print(f"rounds={result.rounds} converged={result.converged} "
          f"labels -> {args.labels}")
    return 0


def cmd_select_k(args) -> int:
    loaded = load_edge_list(args.edges)
    lo, hi = args.candidates.split("..")
    candidates = range(int(lo), int(hi) + 1)
    cfg = SelectionConfig(fit=FitConfig(num_workers=args.workers, seed=args.seed,
                                        max_rounds=args.max_rounds),
                          mode=args.model)
    best, scores = select_k(loaded.graph, candidates, cfg)
    write_score_table(scores, args.out)
    print(f"selected K={best}; score table -> {args.out}")
    return 0


def cmd_eval(args) -> int:
    if args.metric == "nmi":
        _, a = read_labels(args.labels)
        _, b = read_labels(args.truth)
        print(f"nmi {nmi(b, a)!r}")
    else:
        loaded = load_edge_list(args.edges)
        ids, labs = read_labels(args.labels)
        order = np.argsort(loaded.original_ids)
        lookup = dict(zip(loaded.original_ids.tolist(), range(loaded.graph.num_nodes)))
        est = np.empty(loaded.graph.num_nodes, dtype=np.int64)
        for i, lab in zip(ids.tolist(), labs.tolist()):
            est[lookup[i]] = lab
        print(f"red {red(loaded.graph, est)!r}")
    return 0


def cmd_bench(args) -> int:
    spec = bench.ExperimentSpec(replications=args.reps, out_dir=args.out,
                                base_seed=args.seed)
    if args.example == "1":
        bench.run_example1(spec)
    elif args.example == "2":
        bench.run_example2(spec)
    elif args.example == "3":
        bench.run_example3(spec, balanced=True)
        bench.run_example3(spec, balanced=False)
    else:
        bench.run_ablation(spec)
    print(f"benchmark outputs in {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="distsbm",
                                description="Distributed block-model community detection")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="generate a planted network")
    g.add_argument("--model", choices=["sbm", "dcsbm"], default="sbm")
    g.add_argument("--n-nodes", type=int, required=True)
    g.add_argument("--pi", default="0.2,0.3,0.5")
    g.add_argument("--rho", type=float, default=5e-3)
    g.add_argument("--beta", type=float, default=0.8)
    g.add_argument("--m", type=float, default=5.0)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--edges", required=True)
    g.add_argument("--truth", required=True)
    g.set_defaults(func=cmd_generate)

    s = sub.add_parser("split", help="emit a block partition file")
    s.add_argument("--edges", required=True)
    s.add_argument("--workers", type=int, required=True)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_split)

    f = sub.add_parser("fit", help="run the distributed fit")
    f.add_argument("--edges", required=True)
    f.add_argument("--model", choices=["sbm", "dcsbm"], default="sbm")
    f.add_argument("--k", type=int, required=True)
    f.add_argument("--workers", type=int, default=1)
    f.add_argument("--seed", type=int, default=0)
    f.add_argument("--max-rounds", type=int, default=10)
    f.add_argument("--tol", type=float, default=1e-6)
    f.add_argument("--init", choices=["scp", "ssc", "file"], default="scp")
    f.add_argument("--init-file")
    f.add_argument("--labels", required=True)
    f.add_argument("--params")
    f.add_argument("--ledger")
    f.set_defaults(func=cmd_fit)

    k = sub.add_parser("select-k", help="corrected-BIC community count selection")
    k.add_argument("--edges", required=True)
    k.add_argument("--candidates", default="2..8")
    k.add_argument("--model", choices=["sbm", "dcsbm"], default="sbm")
    k.add_argument("--workers", type=int, default=1)
    k.add_argument("--seed", type=int, default=0)
    k.add_argument("--max-rounds", type=int, default=10)
    k.add_argument("--out", required=True)
    k.set_defaults(func=cmd_select_k)

    e = sub.add_parser("eval", help="score a label file")
    e.add_argument("--metric", choices=["nmi", "red"], required=True)
    e.add_argument("--labels", required=True)
    e.add_argument("--truth")
    e.add_argument("--edges")
    e.set_defaults(func=cmd_eval)

    b = sub.add_parser("bench", help="run the benchmark harness")
    b.add_argument("--example", choices=["1", "2", "3", "ablation"], required=True)
    b.add_argument("--reps", type=int, default=20)
    b.add_argument("--seed", type=int, default=12345)
    b.add_argument("--out", default="bench_out")
    b.set_defaults(func=cmd_bench)
    return p


def main(argv=None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
