import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from distsbm.metrics import confusion_matrix, nmi, red

from conftest import dense_adjacency, planted

labels_pair = st.integers(2, 40).flatmap(
    lambda n: st.tuples(
        st.lists(st.integers(1, 4), min_size=n, max_size=n),
        st.lists(st.integers(1, 4), min_size=n, max_size=n)))


def nmi_reference(truth, est):
    """Dictionary-based mutual information over joint entropy."""
    n = len(truth)
    joint, c_t, c_e = {}, {}, {}
    for t, e in zip(truth, est):
        joint[(t, e)] = joint.get((t, e), 0) + 1
        c_t[t] = c_t.get(t, 0) + 1
        c_e[e] = c_e.get(e, 0) + 1
    mi = sum((c / n) * math.log(c * n / (c_t[t] * c_e[e]))
             for (t, e), c in joint.items())
    h = -sum((c / n) * math.log(c / n) for c in joint.values())
    return 1.0 if h == 0 else mi / h


def red_reference(g, est):
    """Quadratic-loop within/between edge-density ratio."""
    n = g.num_nodes
    A = dense_adjacency(g)
    w_edges = b_edges = w_pairs = b_pairs = 0
    for i in range(n):
        for j in range(i + 1, n):
            if est[i] == est[j]:
                w_pairs += 1
                w_edges += A[i, j]
            else:
                b_pairs += 1
                b_edges += A[i, j]
    dw = w_edges / w_pairs
    db = b_edges / b_pairs
    if dw == 0:
        return math.inf if db > 0 else 0.0
    return db / dw


def test_confusion_matrix_is_joint_distribution():
    truth = np.array([1, 1, 2, 2, 3])
    est = np.array([2, 2, 1, 1, 1])
    M = confusion_matrix(est, truth)
    assert M.sum() == pytest.approx(1.0)
    assert M[1, 0] == pytest.approx(0.4)  # est 2 against truth 1


@given(labels_pair)
@settings(max_examples=200, deadline=None)
def test_nmi_matches_reference(pair):
    truth, est = pair
    assert nmi(truth, est) == pytest.approx(nmi_reference(truth, est), abs=1e-12)


@given(labels_pair)
@settings(max_examples=100, deadline=None)
def test_nmi_symmetric_and_bounded(pair):
    truth, est = pair
    v = nmi(truth, est)
    assert 0.0 <= v <= 1.0
    assert v == pytest.approx(nmi(est, truth), abs=1e-12)


def test_nmi_perfect_and_permuted():
    truth = np.array([1, 1, 2, 2, 3, 3])
    assert nmi(truth, truth) == pytest.approx(1.0)
    relabeled = np.array([3, 3, 1, 1, 2, 2])
    assert nmi(truth, relabeled) == pytest.approx(1.0)
    assert nmi([1, 1, 1], [1, 1, 1]) == 1.0


def test_red_matches_reference(small_net):
    rng = np.random.default_rng(0)
    net = planted(N=60, rho=0.2, beta=0.7, seed=2)
    est = rng.integers(1, 4, 60)
    assert red(net.graph, est) == pytest.approx(red_reference(net.graph, est),
                                                abs=1e-12)


def test_red_rewards_true_partition():
    net = planted(N=200, rho=0.15, beta=0.9, seed=3)
    rng = np.random.default_rng(3)
    good = red(net.graph, net.truth)
    bad = red(net.graph, rng.integers(1, 4, 200))
    assert good < bad


def test_red_rejects_single_cluster(small_net):
    with pytest.raises(ValueError):
        red(small_net.graph, np.ones(small_net.graph.num_nodes, dtype=int))
