"""Benchmark harness: the three synthetic study designs plus the splitting /
communication ablation, at desk scale. Emits CSV tables and static plots."""

from __future__ import annotations

import csv
import logging
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .generators import (DcsbmConfig, PlantedNetwork, SbmConfig,
                         generate_dcsbm, generate_sbm, make_planted_theta)
from .graph import SparseGraph
from .metrics import nmi, red
from .partition import IndexMap, WorkerShard, block_split
from .runtime import FitConfig, run_dcpl, run_dpl

log = logging.getLogger(__name__)


@dataclass
class ExperimentSpec:
    replications: int = 20
    base_seed: int = 12345
    out_dir: str = "bench_out"
    make_plots: bool = True

    def seeds(self) -> list[int]:
        return [self.base_seed + i for i in range(self.replications)]


def _fit_cfg(R: int, seed: int, init: str = "scp", max_rounds: int = 40) -> FitConfig:
    return FitConfig(num_workers=R, seed=seed, init=init, max_rounds=max_rounds)


def _write_csv(path: Path, header: list[str], rows: list[list]) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


def _plot_curves(path: Path, table: dict, xlabel: str, ylabel: str, title: str) -> None:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    fig, ax = plt.subplots(figsize=(6, 4))
    for method, (xs, means, sds) in sorted(table.items()):
        ax.errorbar(xs, means, yerr=sds, marker="o", capsize=3, label=method)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.set_title(title)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def _run_point(graph_pack: PlantedNetwork, K: int, R: int, seed: int,
               method: str) -> tuple[float, float]:
    """Fit one planted graph with one method; returns (nmi, wall seconds)."""
    t0 = time.perf_counter()
    if method == "dpl":
        res = run_dpl(graph_pack.graph, K, _fit_cfg(R, seed, init="scp"))
    elif method == "dcpl":
        res = run_dcpl(graph_pack.graph, K, _fit_cfg(R, seed, init="ssc"))
    elif method == "pl-oracle":
        res = run_dpl(graph_pack.graph, K, _fit_cfg(1, seed, init="scp"))
    else:
        raise ValueError(f"unknown method {method!r}")
    wall = time.perf_counter() - t0
    return nmi(graph_pack.truth, res.labels), wall


def _aggregate(rows: list[list], key_cols: int) -> dict:
    """Group measurement rows by (x, method) for plotting."""
    from collections import defaultdict
    acc = defaultdict(list)
    for row in rows:
        acc[(row[0], row[1])].append(row[-2])
    table = defaultdict(lambda: ([], [], []))
    for (x, method), vals in sorted(acc.items()):
        xs, means, sds = table[method]
        xs.append(x)
        means.append(float(np.mean(vals)))
        sds.append(float(np.std(vals, ddof=1)) if len(vals) > 1 else 0.0)
    return dict(table)


def run_example1(spec: ExperimentSpec,
                 n_grid: tuple = (100, 200, 500, 1000),
                 N_grid: tuple = (2000, 5000, 10000, 20000)) -> list[list]:
    """Case 1: fixed N=10,000, sweep worker size n. Case 2: fixed n=200,
    sweep total N. Strong assortative three-block design."""
    K = 3
    pi = np.array([0.2, 0.3, 0.5])
    rows = []
    for n in n_grid:
        N = 10000
        theta = make_planted_theta(5e-3, 0.8, K)
        for seed in spec.seeds():
            net = generate_sbm(SbmConfig(N, K, pi, theta, seed=seed))
            for method in ("dpl", "pl-oracle"):
                score, wall = _run_point(net, K, N // n, seed, method)
                rows.append([n, method, "case1", N, seed, score, wall])
    for N in N_grid:
        n = 200
        theta = make_planted_theta(3e-3, 0.8, K)
        for seed in spec.seeds():
            net = generate_sbm(SbmConfig(N, K, pi, theta, seed=seed))
            score, wall = _run_point(net, K, N // n, seed, "dpl")
            rows.append([N, "dpl", "case2", N, seed, score, wall])
    out = Path(spec.out_dir)
    _write_csv(out / "example1.csv",
               ["x", "method", "case", "N", "seed", "nmi", "wall_s"], rows)
    if spec.make_plots:
        case1 = [r for r in rows if r[2] == "case1"]
        _plot_curves(out / "example1_case1.png", _aggregate(case1, 2),
                     "worker sample size n", "NMI", "consistency in n")
    return rows


def run_example2(spec: ExperimentSpec,
                 rho_grid: tuple = (0.001, 0.004, 0.007, 0.01),
                 beta_grid: tuple = (0.1, 0.3, 0.5, 0.7, 0.9)) -> list[list]:
    """Signal-strength sweeps at N=10,000, n=500: density rho (case 1, fixed
    beta=0.8) and separation beta (case 2, fixed rho=0.01)."""
    K, N, n = 3, 10000, 500
    pi = np.array([0.2, 0.3, 0.5])
    rows = []
    for rho in rho_grid:
        theta = make_planted_theta(rho, 0.8, K)
        for seed in spec.seeds():
            net = generate_sbm(SbmConfig(N, K, pi, theta, seed=seed))
            score, wall = _run_point(net, K, N // n, seed, "dpl")
            rows.append([rho, "dpl", "case1", N, seed, score, wall])
    for beta in beta_grid:
        theta = make_planted_theta(0.01, beta, K)
        for seed in spec.seeds():
            net = generate_sbm(SbmConfig(N, K, pi, theta, seed=seed))
            score, wall = _run_point(net, K, N // n, seed, "dpl")
            rows.append([beta, "dpl", "case2", N, seed, score, wall])
    out = Path(spec.out_dir)
    _write_csv(out / "example2.csv",
               ["x", "method", "case", "N", "seed", "nmi", "wall_s"], rows)
    if spec.make_plots:
        case2 = [r for r in rows if r[2] == "case2"]
        _plot_curves(out / "example2_beta.png", _aggregate(case2, 2),
                     "separation beta", "NMI", "signal strength")
    return rows


def example3_theta() -> np.ndarray:
    return 3e-3 * (np.ones((3, 3)) + np.diag([2.0, 3.0, 4.0]))


def run_example3(spec: ExperimentSpec,
                 m_grid: tuple = (1, 2, 5, 10),
                 balanced: bool = True) -> list[list]:
    """Degree-heterogeneity sweep: two-point degree parameters with level m,
    paired plain vs conditional fits."""
    K, N, n = 3, 10000, 500
    pi = np.array([0.3, 0.3, 0.4]) if balanced else np.array([0.1, 0.2, 0.7])
    theta = example3_theta()
    rows = []
    for m in m_grid:
        for seed in spec.seeds():
            base = SbmConfig(N, K, pi, theta, seed=seed)
            net = generate_dcsbm(DcsbmConfig(base=base, heterogeneity=float(m)))
            for method in ("dpl", "dcpl"):
                score, wall = _run_point(net, K, N // n, seed, method)
                rows.append([m, method, "balanced" if balanced else "imbalanced",
                             N, seed, score, wall])
    out = Path(spec.out_dir)
    tag = "balanced" if balanced else "imbalanced"
    _write_csv(out / f"example3_{tag}.csv",
               ["x", "method", "case", "N", "seed", "nmi", "wall_s"], rows)
    if spec.make_plots:
        _plot_curves(out / f"example3_{tag}.png", _aggregate(rows, 2),
                     "heterogeneity m", "NMI", f"degree heterogeneity ({tag})")
    return rows


def random_split_shards(g: SparseGraph, R: int, seed: int) -> tuple[IndexMap, list[WorkerShard]]:
    """Ablation fixture: same node blocks, but each shard keeps only the
    columns inside its own block (subnetwork-only information)."""
    imap, shards = block_split(g, R, seed)
    out = []
    for shard in shards:
        members = set(shard.members.tolist())
        keep = np.fromiter((c in members for c in shard.col_indices.tolist()),
                           dtype=bool, count=shard.nnz)
        lengths = np.array([keep[a:b].sum() for a, b in
                            zip(shard.row_offsets[:-1], shard.row_offsets[1:])])
        row_offsets = np.concatenate([[0], np.cumsum(lengths)]).astype(np.int64)
        out.append(WorkerShard(worker_id=shard.worker_id, num_rows=shard.num_rows,
                               num_cols=shard.num_cols, row_offsets=row_offsets,
                               col_indices=shard.col_indices[keep],
                               index_map=imap))
    return imap, out


def run_ablation(spec: ExperimentSpec, N: int = 4000, n: int = 400) -> list[list]:
    """2x2 grid {block-wise, random-split} x {one-shot, multi-round} on
    planted assortative graphs; scored by relative density."""
    K = 3
    pi = np.array([0.3, 0.3, 0.4])
    theta = make_planted_theta(8e-3, 0.8, K)
    R = N // n
    rows = []
    for seed in spec.seeds():
        net = generate_sbm(SbmConfig(N, K, pi, theta, seed=seed))
        for splitting in ("block-wise", "random"):
            if splitting == "block-wise":
                pack = block_split(net.graph, R, seed)
            else:
                pack = random_split_shards(net.graph, R, seed)
            for comm, max_rounds in (("one-shot", 1), ("multi-round", 10)):
                cfg = _fit_cfg(R, seed, init="scp", max_rounds=max_rounds)
                res = run_dpl(pack, K, cfg)
                try:
                    score = red(net.graph, res.labels)
                except ValueError:
                    score = float("nan")
                rows.append([splitting, comm, N, seed, score,
                             nmi(net.truth, res.labels)])
    out = Path(spec.out_dir)
    _write_csv(out / "ablation.csv",
               ["splitting", "communication", "N", "seed", "red", "nmi"], rows)
    return rows
