"""Initial global labels from the first shard via regularized spectral
embedding of its columns, with an optional spherical (row-normalized)
variant for degree-heterogeneous networks."""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .partition import WorkerShard

log = logging.getLogger(__name__)


@dataclass
class SpectralConfig:
    oversampling: int = 10
    power_iterations: int = 2
    kmeans_restarts: int = 10
    kmeans_max_iter: int = 100
    rank_tol: float = 1e-8


def shard_csr(shard: WorkerShard) -> sp.csr_matrix:
    data = np.ones(shard.nnz)
    return sp.csr_matrix((data, shard.col_indices, shard.row_offsets),
                         shape=(shard.num_rows, shard.num_cols))


def column_embedding(shard: WorkerShard, K: int, seed: int,
                     cfg: SpectralConfig | None = None) -> tuple[np.ndarray, int]:
    """Top-K right singular vectors of the regularized matrix
    M = A_1 + (tau/N) * J, tau = average column degree, J all-ones.

    Returns (N x K embedding, numerical rank found). Uses randomized
    subspace iteration; deterministic per seed.
    """
    cfg = cfg or SpectralConfig()
    n, N = shard.num_rows, shard.num_cols
    tau = shard.nnz / N  # average column degree of A_1
    c = tau / N
    rng = np.random.default_rng(seed)
    q = min(K + cfg.oversampling, n)

    A = shard_csr(shard)
    ones_n = np.ones(n)

    def matmul(X):        # M @ X, (N, q) -> (n, q)
        return A @ X + c * np.outer(ones_n, X.sum(axis=0))

    def rmatmul(Y):       # M.T @ Y, (n, q) -> (N, q)
        return A.T @ Y + c * np.outer(np.ones(N), Y.sum(axis=0))

    # range finder on M.T: Q spans the top right-singular subspace of M
    Y = rmatmul(rng.standard_normal((n, q)))
    Q, _ = np.linalg.qr(Y)
    for _ in range(cfg.power_iterations):
        Z, _ = np.linalg.qr(matmul(Q))
        Q, _ = np.linalg.qr(rmatmul(Z))
    B = matmul(Q)                      # n x q
    _, svals, Wt = np.linalg.svd(B, full_matrices=False)
    V = Q @ Wt.T                       # N x q right singular vectors of M
    rank = int(np.sum(svals > cfg.rank_tol * max(svals[0], 1e-300)))
    return V[:, :K], rank


def _kmeans_once(X: np.ndarray, K: int, rng: np.random.Generator,
                 max_iter: int) -> tuple[np.ndarray, float]:
    n = X.shape[0]
    # k-means++ seeding
    centers = np.empty((K, X.shape[1]))
    centers[0] = X[rng.integers(n)]
    d2 = np.sum((X - centers[0]) ** 2, axis=1)
    for k in range(1, K):
        total = d2.sum()
        if total <= 0:
            centers[k] = X[rng.integers(n)]
        else:
            centers[k] = X[rng.choice(n, p=d2 / total)]
        d2 = np.minimum(d2, np.sum((X - centers[k]) ** 2, axis=1))
    assign = np.zeros(n, dtype=np.int64)
    for _ in range(max_iter):
        dist = ((X[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)
        new_assign = dist.argmin(axis=1)
        # empty-cluster repair: reseed at the point farthest from its center
        for k in range(K):
            if not np.any(new_assign == k):
                far = dist[np.arange(n), new_assign].argmax()
                centers[k] = X[far]
                new_assign[far] = k
        if np.array_equal(new_assign, assign):
            assign = new_assign
            break
        assign = new_assign
        for k in range(K):
            centers[k] = X[assign == k].mean(axis=0)
    dist = ((X[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)
    inertia = float(dist[np.arange(n), assign].sum())
    return assign, inertia


def kmeans(X: np.ndarray, K: int, seed: int, restarts: int = 10,
           max_iter: int = 100) -> np.ndarray:
    """Multi-restart Lloyd k-means with k-means++ seeding; labels 1..K."""
    rng = np.random.default_rng(seed)
    best, best_inertia = None, np.inf
    for _ in range(restarts):
        assign, inertia = _kmeans_once(X, K, rng, max_iter)
        if inertia < best_inertia:
            best, best_inertia = assign, inertia
    return best + 1


def init_labels_scp(shard: WorkerShard, K: int, seed: int,
                    cfg: SpectralConfig | None = None) -> np.ndarray:
    """Cluster the N column embeddings of the first shard; labels 1..K."""
    cfg = cfg or SpectralConfig()
    N = shard.num_cols
    if K == 1:
        return np.ones(N, dtype=np.int64)
    V, rank = column_embedding(shard, K, seed, cfg)
    if rank < K:
        log.warning("spectral embedding rank collapse (%d < %d); "
                    "falling back to random labels", rank, K)
        return np.random.default_rng(seed).integers(1, K + 1, size=N)
    return kmeans(V, K, seed, cfg.kmeans_restarts, cfg.kmeans_max_iter)


def init_labels_ssc(shard: WorkerShard, K: int, seed: int,
                    cfg: SpectralConfig | None = None) -> np.ndarray:
    """Spherical variant: rows of the embedding are normalized to unit
    length before k-means. Zero rows (isolated columns) are assigned the
    largest cluster's label."""
    cfg = cfg or SpectralConfig()
    N = shard.num_cols
    if K == 1:
        return np.ones(N, dtype=np.int64)
    V, rank = column_embedding(shard, K, seed, cfg)
    if rank < K:
        log.warning("spectral embedding rank collapse (%d < %d); "
                    "falling back to random labels", rank, K)
        return np.random.default_rng(seed).integers(1, K + 1, size=N)
    norms = np.linalg.norm(V, axis=1)
    nonzero = norms > 0
    labels = np.empty(N, dtype=np.int64)
    Vn = V[nonzero] / norms[nonzero, None]
    labels_nz = kmeans(Vn, K, seed, cfg.kmeans_restarts, cfg.kmeans_max_iter)
    labels[nonzero] = labels_nz
    if np.any(~nonzero):
        counts = np.bincount(labels_nz, minlength=K + 1)[1:]
        labels[~nonzero] = int(counts.argmax()) + 1
    return labels
