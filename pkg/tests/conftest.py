"""Shared helpers: small planted instances and dense reference views."""

import numpy as np
import pytest

from distsbm.generators import SbmConfig, generate_sbm, make_planted_theta
from distsbm.graph import SparseGraph, build_graph


def dense_adjacency(g: SparseGraph) -> np.ndarray:
    A = np.zeros((g.num_nodes, g.num_nodes), dtype=np.int64)
    for i in range(g.num_nodes):
        A[i, g.neighbors(i)] = 1
    return A


def graph_from_dense(A: np.ndarray) -> SparseGraph:
    u, v = np.nonzero(np.triu(A, 1))
    g, _, _ = build_graph(u, v, A.shape[0])
    return g


def planted(N=300, K=3, rho=0.08, beta=0.8, seed=0, pi=None):
    if pi is None:
        pi = np.full(K, 1.0 / K)
    cfg = SbmConfig(N, K, np.asarray(pi, dtype=float),
                    make_planted_theta(rho, beta, K), seed=seed)
    return generate_sbm(cfg)


@pytest.fixture
def small_net():
    return planted()
