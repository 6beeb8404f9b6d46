"""Synthetic network generators for planted-partition block models."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from .graph import SparseGraph, build_graph

log = logging.getLogger(__name__)


@dataclass
class SbmConfig:
    num_nodes: int
    num_blocks: int
    pi: np.ndarray          # length K, sums to 1
    theta: np.ndarray       # K x K symmetric, entries in (0, 1)
    seed: int = 0
    require_assortative: bool = False

    def validate(self) -> None:
        pi = np.asarray(self.pi, dtype=float)
        theta = np.asarray(self.theta, dtype=float)
        K = self.num_blocks
        if pi.shape != (K,) or np.any(pi <= 0) or not math.isclose(pi.sum(), 1.0, abs_tol=1e-9):
            raise ValueError("pi must be a positive probability vector of length K")
        if theta.shape != (K, K) or not np.allclose(theta, theta.T):
            raise ValueError("theta must be a symmetric K x K matrix")
        if np.any(theta <= 0) or np.any(theta >= 1):
            raise ValueError("theta entries must lie in (0, 1)")
        if self.require_assortative and K > 1:
            off = theta[~np.eye(K, dtype=bool)]
            if off.max() >= np.diag(theta).min():
                raise ValueError("assortativity requires max off-diagonal < min diagonal")


@dataclass
class DcsbmConfig:
    base: SbmConfig
    heterogeneity: float | None = None   # two-point law level m
    alpha: np.ndarray | None = None      # explicit per-node degree parameters

    def validate(self) -> None:
        self.base.validate()
        if (self.heterogeneity is None) == (self.alpha is None):
            raise ValueError("specify exactly one of heterogeneity m or explicit alpha")
        if self.heterogeneity is not None and self.heterogeneity < 1:
            raise ValueError("heterogeneity level m must be >= 1")
        if self.alpha is not None:
            a = np.asarray(self.alpha, dtype=float)
            if a.shape != (self.base.num_nodes,) or np.any(a <= 0):
                raise ValueError("alpha must be positive with one entry per node")
            if not math.isclose(a.mean(), 1.0, rel_tol=1e-6):
                raise ValueError("alpha must average to 1 (identifiability)")


@dataclass
class PlantedNetwork:
    graph: SparseGraph
    truth: np.ndarray       # labels 1..K
    config: object
    alpha: np.ndarray | None = None
    num_capped_rates: int = 0


def make_planted_theta(rho: float, beta: float, K: int) -> np.ndarray:
    """Connectivity matrix with diagonal rho and off-diagonal rho * (1 - beta)."""
    if not (0.0 <= rho <= 1.0 and 0.0 <= beta <= 1.0):
        raise ValueError("rho and beta must lie in [0, 1]")
    return rho * ((1.0 - beta) * np.ones((K, K)) + beta * np.eye(K))


def two_point_alpha(N: int, m: float, rng: np.random.Generator) -> np.ndarray:
    """Degree parameters taking values x and m*x with equal probability,
    x = 2 / (m + 1), so that E(alpha) = 1."""
    x = 2.0 / (m + 1.0)
    high = rng.random(N) < 0.5
    return np.where(high, m * x, x)


def _bernoulli_hits(M: int, p: float, rng: np.random.Generator) -> np.ndarray:
    """Indices of successes in M independent Bernoulli(p) trials, drawn
    exactly via geometric gap sampling."""
    if M <= 0 or p <= 0.0:
        return np.empty(0, dtype=np.int64)
    if p >= 1.0:
        return np.arange(M, dtype=np.int64)
    chunks = []
    pos = -1  # last hit index
    while True:
        remaining = M - pos - 1
        expect = remaining * p
        size = int(expect + 10.0 * math.sqrt(expect + 1.0) + 10.0)
        gaps = rng.geometric(p, size=size)
        idx = pos + np.cumsum(gaps)
        cut = np.searchsorted(idx, M)
        if cut < idx.size:
            chunks.append(idx[:cut])
            break
        chunks.append(idx)
        pos = int(idx[-1])
    return np.concatenate(chunks) if chunks else np.empty(0, dtype=np.int64)


def _within_group_pairs(members: np.ndarray, hits: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Map flat upper-triangle indices over a group of size s to node pairs."""
    s = members.size
    # row i (0-based) owns s-1-i pair slots; cum[i] = #slots before row i
    row_sizes = np.arange(s - 1, 0, -1, dtype=np.int64)
    cum = np.concatenate([[0], np.cumsum(row_sizes)])
    rows = np.searchsorted(cum, hits, side="right") - 1
    cols = rows + 1 + (hits - cum[rows])
    return members[rows], members[cols]


def _cross_group_pairs(mem_a: np.ndarray, mem_b: np.ndarray,
                       hits: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    sb = mem_b.size
    return mem_a[hits // sb], mem_b[hits % sb]


def _sample_group_edges(groups: list[np.ndarray], rate, rng) -> tuple[np.ndarray, np.ndarray]:
    """Sample edges where every unordered node pair with group labels (a, b)
    is an independent Bernoulli(rate(a, b))."""
    us, vs = [], []
    G = len(groups)
    for a in range(G):
        for b in range(a, G):
            p = rate(a, b)
            if a == b:
                s = groups[a].size
                hits = _bernoulli_hits(s * (s - 1) // 2, p, rng)
                u, v = _within_group_pairs(groups[a], hits)
            else:
                hits = _bernoulli_hits(groups[a].size * groups[b].size, p, rng)
                u, v = _cross_group_pairs(groups[a], groups[b], hits)
            us.append(u)
            vs.append(v)
    u = np.concatenate(us) if us else np.empty(0, dtype=np.int64)
    v = np.concatenate(vs) if vs else np.empty(0, dtype=np.int64)
    return u, v


def generate_sbm(cfg: SbmConfig) -> PlantedNetwork:
    """Labels i.i.d. multinomial(pi); each pair i<j is an edge with
    probability theta[z_i, z_j]. Deterministic per seed."""
    cfg.validate()
    N, K = cfg.num_nodes, cfg.num_blocks
    rng = np.random.default_rng(cfg.seed)
    # one multinomial stream for labels before any edge draws
    truth = rng.choice(K, size=N, p=np.asarray(cfg.pi, dtype=float)) + 1
    theta = np.asarray(cfg.theta, dtype=float)
    groups = [np.flatnonzero(truth == k + 1) for k in range(K)]
    u, v = _sample_group_edges(groups, lambda a, b: theta[a, b], rng)
    g, _, _ = build_graph(u, v, num_nodes=N)
    return PlantedNetwork(graph=g, truth=truth, config=cfg)


def generate_dcsbm(cfg: DcsbmConfig) -> PlantedNetwork:
    """Degree-corrected variant: pair (i, j) carries a Poisson rate
    alpha_i * theta[z_i, z_j] * alpha_j and the binary adjacency records
    whether the count is >= 1, i.e. Bernoulli(1 - exp(-rate))."""
    cfg.validate()
    base = cfg.base
    N, K = base.num_nodes, base.num_blocks
    rng = np.random.default_rng(base.seed)
    truth = rng.choice(K, size=N, p=np.asarray(base.pi, dtype=float)) + 1
    if cfg.alpha is not None:
        alpha = np.asarray(cfg.alpha, dtype=float)
        levels = np.unique(alpha)
    else:
        alpha = two_point_alpha(N, cfg.heterogeneity, rng)
        levels = np.unique(alpha)
    theta = np.asarray(base.theta, dtype=float)
    # groups keyed by (block, alpha level): constant rate within a group pair
    groups = []
    meta = []  # (block index, alpha value)
    for k in range(K):
        for a in levels:
            mem = np.flatnonzero((truth == k + 1) & (alpha == a))
            if mem.size:
                groups.append(mem)
                meta.append((k, a))
    capped = 0

    def rate(a: int, b: int) -> float:
        nonlocal capped
        ka, aa = meta[a]
        kb, ab = meta[b]
        lam = aa * theta[ka, kb] * ab
        if lam >= 1.0:
            na, nb = groups[a].size, groups[b].size
            capped += na * (na - 1) // 2 if a == b else na * nb
        return 1.0 - math.exp(-lam)

    u, v = _sample_group_edges(groups, rate, rng)
    if capped:
        log.warning("DCSBM: %d pairs had Poisson rate >= 1; Bernoulli "
                    "approximation degraded", capped)
    g, _, _ = build_graph(u, v, num_nodes=N)
    return PlantedNetwork(graph=g, truth=truth, config=cfg, alpha=alpha,
                          num_capped_rates=capped)
