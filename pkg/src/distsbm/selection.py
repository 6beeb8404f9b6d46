"""Community-count selection via a distributed corrected BIC."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .graph import SparseGraph
from .partition import block_split
from .runtime import FitConfig, run_dcpl, run_dpl
from .worker import worker_summary

log = logging.getLogger(__name__)

THETA_CLAMP = 1e-12


@dataclass
class KCandidateScore:
    candidate: int
    loglik: float          # sum of per-worker log-likelihoods
    penalty: float
    total: float
    labels: np.ndarray | None = None
    failed: bool = False
    degenerate: bool = False


def bic_penalty(K: int, N: int) -> float:
    return N * math.log(K) + K * (K + 1) / 2.0 * math.log(N)


def worker_loglik(shard, labels: np.ndarray, K: int) -> tuple[float, bool]:
    """Per-shard Bernoulli block log-likelihood of the fitted labels.

    theta[l, k] is the shard's rate estimate O_r[l, k] / n_r[l] scaled by the
    global size of column cluster k; it is clamped away from {0, 1} before
    the logs. Returns (loglik, degenerate_flag)."""
    labels = np.asarray(labels, dtype=np.int64)
    O, n_r = worker_summary(shard, labels, K)
    N_k = np.bincount(labels, minlength=K + 1)[1:].astype(np.float64)
    degenerate = bool(np.any(n_r == 0) or np.any(N_k == 0))
    lam = O / np.maximum(n_r, 1)[:, None]
    theta = lam / np.maximum(N_k, 1.0)[None, :]
    theta = np.clip(theta, THETA_CLAMP, 1.0 - THETA_CLAMP)
    n_pairs = np.outer(n_r.astype(np.float64), N_k)
    ll = float((O * np.log(theta / (1.0 - theta))).sum()
               - (n_pairs * np.log(1.0 - theta)).sum())
    return ll, degenerate


@dataclass
class SelectionConfig:
    fit: FitConfig = field(default_factory=FitConfig)
    mode: str = "sbm"      # sbm -> multi-round plain fit, dcsbm -> conditional


def select_k(g: SparseGraph, candidates, cfg: SelectionConfig) -> tuple[int, list[KCandidateScore]]:
    """Fit each candidate count, score with the corrected BIC, and return
    the argmax (ties to the smaller candidate)."""
    candidates = sorted(set(int(k) for k in candidates))
    if not candidates:
        raise ValueError("candidate set is empty")
    imap, shards = block_split(g, cfg.fit.num_workers, cfg.fit.seed)
    scores = []
    for Kp in candidates:
        try:
            if cfg.mode == "sbm":
                result = run_dpl((imap, shards), Kp, cfg.fit)
            else:
                result = run_dcpl((imap, shards), Kp, cfg.fit)
            total_ll = 0.0
            degenerate = False
            for shard in shards:
                ll, degen = worker_loglik(shard, result.labels, Kp)
                total_ll += ll
                degenerate = degenerate or degen
            penalty = bic_penalty(Kp, g.num_nodes)
            scores.append(KCandidateScore(candidate=Kp, loglik=total_ll,
                                          penalty=penalty,
                                          total=total_ll - penalty,
                                          labels=result.labels,
                                          degenerate=degenerate))
        except Exception:
            log.exception("fit failed for candidate K=%d", Kp)
            scores.append(KCandidateScore(candidate=Kp, loglik=-math.inf,
                                          penalty=bic_penalty(Kp, g.num_nodes),
                                          total=-math.inf, failed=True))
    best = max(scores, key=lambda s: (s.total, -s.candidate))
    return best.candidate, scores


def write_score_table(scores: list[KCandidateScore], path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("K,loglik,penalty,score,failed,degenerate\n")
        for s in scores:
            fh.write(f"{s.candidate},{s.loglik!r},{s.penalty!r},{s.total!r},"
                     f"{int(s.failed)},{int(s.degenerate)}\n")
