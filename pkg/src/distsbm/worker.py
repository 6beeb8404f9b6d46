"""Per-worker computation: count statistics, the inner EM for the Poisson
mixture (and its degree-conditioned multinomial variant), and local label
updates."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.special import logsumexp

SMOOTHING_FLOOR = 1e-10


@dataclass
class CountStats:
    b: np.ndarray   # n x K edge counts into each labeled group
    d: np.ndarray   # length n row degrees (b row sums)


@dataclass
class ModelParams:
    pi: np.ndarray                    # length K
    lam: np.ndarray | None = None     # K x K Poisson means (SBM mode)
    psi: np.ndarray | None = None     # K x K row-stochastic (DCSBM mode)

    @property
    def mode(self) -> str:
        return "sbm" if self.lam is not None else "dcsbm"

    @property
    def K(self) -> int:
        return self.pi.size


@dataclass
class EmResult:
    params: ModelParams
    tau: np.ndarray                   # n x K responsibilities
    n_iters: int
    objectives: list = field(default_factory=list)
    ops: int = 0                      # multiply-add count
    degenerate: bool = False

    def ascent_violations(self, rel_tol: float = 1e-8) -> int:
        v = 0
        for prev, cur in zip(self.objectives, self.objectives[1:]):
            if cur < prev - rel_tol * (abs(prev) + 1.0):
                v += 1
        return v


def count_stats(shard, labels: np.ndarray, K: int) -> CountStats:
    """b[i', k] = number of edges from local node i' to nodes labeled k."""
    n = shard.num_rows
    rows = np.repeat(np.arange(n), shard.row_degrees)
    lab0 = np.asarray(labels)[shard.col_indices] - 1
    b = np.bincount(rows * K + lab0, minlength=n * K).reshape(n, K)
    return CountStats(b=b.astype(np.float64), d=b.sum(axis=1).astype(np.float64))


def worker_summary(shard, labels: np.ndarray, K: int) -> tuple[np.ndarray, np.ndarray]:
    """Block edge counts O_r[l, k] (in-worker label l against global label k)
    and in-worker label sizes n_r[l]."""
    labels = np.asarray(labels)
    row_lab0 = labels[shard.members] - 1
    rows = np.repeat(row_lab0, shard.row_degrees)
    cols = labels[shard.col_indices] - 1
    O = np.bincount(rows * K + cols, minlength=K * K).reshape(K, K).astype(np.int64)
    n_r = np.bincount(row_lab0, minlength=K).astype(np.int64)
    return O, n_r


def sbm_objective(b: np.ndarray, pi: np.ndarray, lam: np.ndarray) -> tuple[float, np.ndarray]:
    """Pseudo log-likelihood of the count rows under the Poisson mixture
    (b! constants dropped). Returns (objective, n x K log joint matrix)."""
    lam_s = lam + SMOOTHING_FLOOR
    log_joint = np.log(pi + SMOOTHING_FLOOR)[None, :] + b @ np.log(lam_s).T \
        - lam_s.sum(axis=1)[None, :]
    return float(logsumexp(log_joint, axis=1).sum()), log_joint


def dcsbm_objective(b: np.ndarray, pi: np.ndarray, psi: np.ndarray) -> tuple[float, np.ndarray]:
    """Conditional pseudo log-likelihood (multinomial mixture given degrees)."""
    psi_s = psi + SMOOTHING_FLOOR
    log_joint = np.log(pi + SMOOTHING_FLOOR)[None, :] + b @ np.log(psi_s).T
    return float(logsumexp(log_joint, axis=1).sum()), log_joint


def _responsibilities(log_joint: np.ndarray) -> np.ndarray:
    tau = np.exp(log_joint - logsumexp(log_joint, axis=1, keepdims=True))
    tau /= tau.sum(axis=1, keepdims=True)
    return tau


def em_sbm(stats: CountStats, init: ModelParams, tol: float = 1e-6,
           max_iter: int = 100) -> EmResult:
    """Alternate the Poisson-mixture E-step (in log space) and M-step until
    the pseudo log-likelihood stabilizes."""
    b = stats.b
    n, K = b.shape
    pi = init.pi.copy()
    lam = init.lam.copy()
    objectives = []
    ops = 0
    degenerate = False
    tau = np.full((n, K), 1.0 / K)
    n_iters = 0
    for n_iters in range(1, max_iter + 1):
        obj, log_joint = sbm_objective(b, pi, lam)
        tau = _responsibilities(log_joint)
        ops += n * K * K + n * K
        # M-step
        weights = tau.sum(axis=0)
        pi = weights / weights.sum()
        low = weights < SMOOTHING_FLOOR * n
        new_lam = (tau.T @ b) / np.maximum(weights, SMOOTHING_FLOOR)[:, None]
        if np.any(low):
            new_lam[low] = lam[low]  # freeze starved rows at previous value
            degenerate = True
        lam = new_lam
        ops += 2 * n * K * K
        objectives.append(obj)
        if len(objectives) >= 2:
            prev = objectives[-2]
            if abs(obj - prev) <= tol * (abs(prev) + 1.0):
                break
    final_obj, log_joint = sbm_objective(b, pi, lam)
    tau = _responsibilities(log_joint)
    objectives.append(final_obj)
    return EmResult(params=ModelParams(pi=pi, lam=lam), tau=tau,
                    n_iters=n_iters, objectives=objectives, ops=ops,
                    degenerate=degenerate)


def em_dcsbm(stats: CountStats, init: ModelParams, tol: float = 1e-6,
             max_iter: int = 100) -> EmResult:
    """Degree-conditioned variant: multinomial responsibilities and
    row-normalized rate estimates. Zero-degree rows fall back to the prior
    automatically (their count row is all zero)."""
    b, d = stats.b, stats.d
    n, K = b.shape
    pi = init.pi.copy()
    psi = init.psi.copy()
    objectives = []
    ops = 0
    degenerate = False
    tau = np.full((n, K), 1.0 / K)
    n_iters = 0
    for n_iters in range(1, max_iter + 1):
        obj, log_joint = dcsbm_objective(b, pi, psi)
        tau = _responsibilities(log_joint)
        ops += n * K * K + n * K
        weights = tau.sum(axis=0)
        pi = weights / weights.sum()
        denom = tau.T @ d
        low = denom < SMOOTHING_FLOOR * n
        new_psi = (tau.T @ b) / np.maximum(denom, SMOOTHING_FLOOR)[:, None]
        if np.any(low):
            new_psi[low] = psi[low]
            degenerate = True
        row_sums = new_psi.sum(axis=1, keepdims=True)
        psi = new_psi / np.maximum(row_sums, SMOOTHING_FLOOR)
        ops += 2 * n * K * K
        objectives.append(obj)
        if len(objectives) >= 2:
            prev = objectives[-2]
            if abs(obj - prev) <= tol * (abs(prev) + 1.0):
                break
    final_obj, log_joint = dcsbm_objective(b, pi, psi)
    tau = _responsibilities(log_joint)
    objectives.append(final_obj)
    return EmResult(params=ModelParams(pi=pi, psi=psi), tau=tau,
                    n_iters=n_iters, objectives=objectives, ops=ops,
                    degenerate=degenerate)


def local_label_update(tau: np.ndarray) -> np.ndarray:
    """Per-row argmax of the responsibilities; ties break to the smallest
    label index. Labels 1..K."""
    return np.argmax(tau, axis=1) + 1
