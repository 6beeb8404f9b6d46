"""Clustering quality metrics: confusion matrix, normalized mutual
information, and relative edge density."""

from __future__ import annotations

import math

import numpy as np

from .graph import SparseGraph


def confusion_matrix(est: np.ndarray, truth: np.ndarray) -> np.ndarray:
    """M[k, l] = fraction of nodes with estimated label k+1 and true label
    l+1; entries sum to 1."""
    est = np.asarray(est, dtype=np.int64)
    truth = np.asarray(truth, dtype=np.int64)
    if est.shape != truth.shape:
        raise ValueError("label vectors must have equal length")
    Ke = int(est.max())
    Kt = int(truth.max())
    N = est.size
    M = np.bincount((est - 1) * Kt + (truth - 1), minlength=Ke * Kt)
    return M.reshape(Ke, Kt) / N


def nmi(truth: np.ndarray, est: np.ndarray) -> float:
    """Mutual information normalized by the joint entropy, in [0, 1];
    1 at perfect agreement up to label permutation. Both partitions
    trivial (a single block each) is defined as 1."""
    M = confusion_matrix(np.asarray(est), np.asarray(truth))
    row = M.sum(axis=1)
    col = M.sum(axis=0)
    nz = M > 0
    joint_entropy = -float((M[nz] * np.log(M[nz])).sum())
    if joint_entropy == 0.0:
        return 1.0  # both partitions trivial
    outer = row[:, None] * col[None, :]
    mi = float((M[nz] * np.log(M[nz] / outer[nz])).sum())
    value = mi / joint_entropy
    if -1e-12 <= value < 0.0:
        value = 0.0
    return min(max(value, 0.0), 1.0)


def red(g: SparseGraph, est: np.ndarray) -> float:
    """Relative density: between-community edge density divided by
    within-community edge density, over unordered node pairs. Smaller
    means a cleaner partition."""
    est = np.asarray(est, dtype=np.int64)
    if est.size != g.num_nodes:
        raise ValueError("label vector length must match the graph")
    sizes = np.bincount(est)[1:]
    sizes = sizes[sizes > 0]
    if sizes.size < 2:
        raise ValueError("relative density needs at least two communities")
    N = g.num_nodes
    pairs_total = N * (N - 1) // 2
    pairs_within = int((sizes * (sizes - 1) // 2).sum())
    pairs_between = pairs_total - pairs_within
    if pairs_within == 0:
        raise ValueError("no within-community pairs")
    u, v = g.edge_pairs()
    edges_within = int((est[u] == est[v]).sum())
    edges_between = g.num_edges - edges_within
    c_within = edges_within / pairs_within
    c_between = edges_between / pairs_between
    if c_within == 0.0:
        return math.inf if c_between > 0 else 0.0
    return c_between / c_within
