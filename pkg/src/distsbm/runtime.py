"""Master-coordinator runtime: an in-process message-passing simulation of
the multi-round two-step protocol, with exact communication-bit and
arithmetic-op accounting."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .graph import SparseGraph
from .partition import IndexMap, WorkerShard, block_split, reassemble_labels
from .spectral import SpectralConfig, init_labels_scp, init_labels_ssc
from .worker import (ModelParams, count_stats, em_dcsbm, em_sbm,
                     local_label_update, worker_summary)

FLOAT_BITS = 64


# ---------------------------------------------------------------------------
# Message codec. The ledger charges the exact payload bit counts; byte
# buffers are padded to whole bytes for transport.

def label_width(K: int) -> int:
    """Bits per label: ceil(log2 K); a single community needs no bits."""
    return max(0, math.ceil(math.log2(K))) if K > 1 else 0


def encode_labels(labels: np.ndarray, K: int) -> tuple[bytes, int]:
    w = label_width(K)
    n = len(labels)
    if w == 0:
        return b"", 0
    vals = (np.asarray(labels, dtype=np.int64) - 1).astype(np.uint64)
    shifts = np.arange(w - 1, -1, -1, dtype=np.uint64)
    bits = ((vals[:, None] >> shifts[None, :]) & 1).astype(np.uint8).ravel()
    return np.packbits(bits).tobytes(), n * w


def decode_labels(data: bytes, n: int, K: int) -> np.ndarray:
    w = label_width(K)
    if w == 0:
        return np.ones(n, dtype=np.int64)
    bits = np.unpackbits(np.frombuffer(data, dtype=np.uint8))[: n * w]
    vals = bits.reshape(n, w).astype(np.int64)
    weights = 1 << np.arange(w - 1, -1, -1)
    return vals @ weights + 1


def encode_floats(arr: np.ndarray) -> tuple[bytes, int]:
    flat = np.ascontiguousarray(arr, dtype=np.float64)
    return flat.tobytes(), flat.size * FLOAT_BITS


def decode_floats(data: bytes, shape: tuple) -> np.ndarray:
    return np.frombuffer(data, dtype=np.float64).reshape(shape).copy()


def params_payload_bits(K: int) -> int:
    """Broadcast parameter payload: pi (K) plus one K x K rate matrix."""
    return FLOAT_BITS * (K + K * K)


# ---------------------------------------------------------------------------
# Ledger

@dataclass
class RoundRecord:
    round_index: int
    bits_broadcast: int = 0
    bits_gathered: int = 0
    ops: int = 0
    em_iters: list = field(default_factory=list)
    objective: float = math.nan
    degenerate: bool = False
    messages: dict = field(default_factory=dict)  # category -> count


@dataclass
class RoundLedger:
    rounds: list = field(default_factory=list)

    def totals(self) -> dict:
        return {
            "bits_broadcast": sum(r.bits_broadcast for r in self.rounds),
            "bits_gathered": sum(r.bits_gathered for r in self.rounds),
            "ops": sum(r.ops for r in self.rounds),
        }

    def write_csv(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("round,bits_broadcast,bits_gathered,ops,objective\n")
            for r in self.rounds:
                fh.write(f"{r.round_index},{r.bits_broadcast},{r.bits_gathered},"
                         f"{r.ops},{r.objective!r}\n")


@dataclass
class FitResult:
    labels: np.ndarray
    params: ModelParams
    ledger: RoundLedger
    rounds: int
    converged: bool
    degenerate_flags: list
    ascent_violations: int = 0
    objective_trace: list = field(default_factory=list)
    index_map: IndexMap | None = None
    label_trace: list = field(default_factory=list)  # filled when requested


@dataclass
class FitConfig:
    num_workers: int = 1
    seed: int = 0
    init: str = "scp"                 # scp | ssc | file (labels supplied)
    init_labels: np.ndarray | None = None
    inner_tol: float = 1e-6
    inner_max_iter: int = 100
    outer_tol: float = 1e-6
    max_rounds: int = 10
    spectral: SpectralConfig = field(default_factory=SpectralConfig)
    record_labels: bool = False
    split_merge: bool = True
    split_merge_ratio: float = 0.4
    split_merge_max: int = 5
    split_merge_cooldown: int = 3


# ---------------------------------------------------------------------------
# Aggregation

def aggregate_global_params(summaries: list[tuple[np.ndarray, np.ndarray]],
                            N: int, mode: str = "sbm") -> tuple[ModelParams, bool]:
    """Combine worker summaries (O_r, n_r), in worker order, into global
    estimates; returns (params, degenerate_flag)."""
    K = summaries[0][1].size
    O = np.zeros((K, K), dtype=np.int64)
    counts = np.zeros(K, dtype=np.int64)
    for O_r, n_r in summaries:
        O += O_r
        counts += n_r
    pi = counts / N
    degenerate = bool(np.any(counts == 0))
    lam = np.empty((K, K))
    nonzero = counts > 0
    lam[nonzero] = O[nonzero] / counts[nonzero, None]
    if degenerate:
        mean_row = O.sum(axis=0) / max(counts.sum(), 1)
        lam[~nonzero] = mean_row
    if mode == "sbm":
        return ModelParams(pi=pi, lam=lam), degenerate
    row_sums = lam.sum(axis=1, keepdims=True)
    psi = lam / np.maximum(row_sums, 1e-300)
    return ModelParams(pi=pi, psi=psi), degenerate


# ---------------------------------------------------------------------------
# Split-merge escape. With a weak initial labelling the outer iteration can
# settle at a local optimum where two planted communities share one cluster
# while another community is split across two near-duplicate clusters. The
# master detects the duplicate pair from the aggregated rate rows, merges it,
# and splits the largest remaining cluster uniformly at random; the iteration
# reliably separates evenly mixed communities from there.

def redundant_row_pair(params: ModelParams, ratio: float) -> tuple[int, int] | None:
    """Closest pair of rate rows (1-based cluster ids) when it is far closer
    than the most separated pair, or None."""
    mat = params.lam if params.lam is not None else params.psi
    K = mat.shape[0]
    if K < 3:
        return None
    best = None
    d_min, d_max = math.inf, 0.0
    for l in range(K):
        for m in range(l + 1, K):
            norm = np.abs(mat[l]).sum() + np.abs(mat[m]).sum()
            d = np.abs(mat[l] - mat[m]).sum() / max(norm, 1e-300)
            if d < d_min:
                d_min, best = d, (l + 1, m + 1)
            d_max = max(d_max, d)
    if d_max > 0.0 and d_min < ratio * d_max:
        return best
    return None


def split_merge_labels(labels: np.ndarray, pair: tuple[int, int],
                       rng: np.random.Generator) -> np.ndarray:
    """Merge the duplicate pair into its first cluster and randomly halve the
    largest cluster outside the pair into the freed label."""
    keep, freed = pair
    out = labels.copy()
    out[out == freed] = keep
    sizes = np.bincount(out, minlength=max(int(out.max()), keep, freed) + 1)
    sizes[keep] = -1
    target = int(sizes.argmax())
    members = np.flatnonzero(out == target)
    out[members[rng.random(members.size) < 0.5]] = freed
    return out


def _perturbation_rng(seed: int, round_index: int) -> np.random.Generator:
    # shared by the distributed and single-machine paths so their label
    # sequences stay identical
    return np.random.default_rng([seed & 0x7FFFFFFF, round_index, 0x5D17])


# ---------------------------------------------------------------------------
# Simulated workers and master

class SimWorker:
    """Holds one shard; all interaction goes through encoded messages."""

    def __init__(self, shard: WorkerShard, K: int, mode: str, cfg: FitConfig):
        self.shard = shard
        self.K = K
        self.mode = mode
        self.cfg = cfg
        self._labels = None  # decoded global labels

    def receive_labels(self, payload: bytes) -> None:
        self._labels = decode_labels(payload, self.shard.num_cols, self.K)

    def summaries(self) -> tuple[bytes, int, int]:
        """Encoded (O_r, n_r); returns (payload, bits, ops)."""
        O, n_r = worker_summary(self.shard, self._labels, self.K)
        buf_o, bits_o = encode_floats(O.astype(np.float64))
        buf_n, bits_n = encode_floats(n_r.astype(np.float64))
        return buf_o + buf_n, bits_o + bits_n, self.shard.nnz

    def run_inner(self, params_payload: bytes) -> tuple[bytes, int, float, int, int, bool]:
        """Decode params, run count stats + EM + label update. Returns
        (encoded local labels, label bits, final objective, em iterations,
        op count, degenerate flag); the objective scalar is charged
        FLOAT_BITS on gather."""
        K = self.K
        pi = decode_floats(params_payload[: K * 8], (K,))
        mat = decode_floats(params_payload[K * 8:], (K, K))
        stats = count_stats(self.shard, self._labels, K)
        ops = self.shard.nnz
        if self.mode == "sbm":
            res = em_sbm(stats, ModelParams(pi=pi, lam=mat),
                         tol=self.cfg.inner_tol, max_iter=self.cfg.inner_max_iter)
        else:
            res = em_dcsbm(stats, ModelParams(pi=pi, psi=mat),
                           tol=self.cfg.inner_tol, max_iter=self.cfg.inner_max_iter)
        ops += res.ops
        local = local_label_update(res.tau)
        payload, bits = encode_labels(local, K)
        self._em_result = res
        return payload, bits, res.objectives[-1], res.n_iters, ops, res.degenerate


def _initial_labels(shards, K, mode, cfg) -> np.ndarray:
    if cfg.init == "file":
        if cfg.init_labels is None:
            raise ValueError("init='file' requires init_labels")
        return np.asarray(cfg.init_labels, dtype=np.int64)
    if cfg.init == "scp" or (cfg.init == "auto" and mode == "sbm"):
        return init_labels_scp(shards[0], K, cfg.seed, cfg.spectral)
    if cfg.init == "ssc" or (cfg.init == "auto" and mode == "dcsbm"):
        return init_labels_ssc(shards[0], K, cfg.seed, cfg.spectral)
    raise ValueError(f"unknown init mode {cfg.init!r}")


def _run_distributed(g_or_shards, K: int, cfg: FitConfig, mode: str,
                     worker_order: list[int] | None = None) -> FitResult:
    if isinstance(g_or_shards, SparseGraph):
        imap, shards = block_split(g_or_shards, cfg.num_workers, cfg.seed)
    else:
        imap, shards = g_or_shards
    R = imap.num_workers
    N = imap.num_nodes
    workers = [SimWorker(sh, K, mode, cfg) for sh in shards]
    order = worker_order if worker_order is not None else list(range(R))

    labels = _initial_labels(shards, K, mode, cfg)
    ledger = RoundLedger()
    params = None
    prev_obj = None
    converged = False
    degenerate_flags = []
    ascent_violations = 0
    objective_trace = []
    label_trace = [labels.copy()] if cfg.record_labels else []
    rounds = 0
    fires, last_fire = 0, -(10 ** 9)
    for s in range(1, cfg.max_rounds + 1):
        rec = RoundRecord(round_index=s)
        # broadcast current global labels to every worker
        label_payload, label_bits = encode_labels(labels, K)
        for r in order:
            workers[r].receive_labels(label_payload)
            rec.bits_broadcast += label_bits
        rec.messages["broadcast_labels"] = R
        # gather summaries (fixed-order reduction regardless of arrival order)
        summary_store = [None] * R
        for r in order:
            payload, bits, ops = workers[r].summaries()
            rec.bits_gathered += bits
            rec.ops += ops
            O = decode_floats(payload[: K * K * 8], (K, K)).astype(np.int64)
            n_r = decode_floats(payload[K * K * 8:], (K,)).astype(np.int64)
            summary_store[r] = (O, n_r)
        rec.messages["gather_summaries"] = R
        params, agg_degenerate = aggregate_global_params(summary_store, N, mode)
        # broadcast parameters
        mat = params.lam if mode == "sbm" else params.psi
        p_payload = encode_floats(params.pi)[0] + encode_floats(mat)[0]
        p_bits = params_payload_bits(K)
        rec.bits_broadcast += p_bits * R
        rec.messages["broadcast_params"] = R
        # workers run count stats + inner EM; gather local labels + objective
        locals_store = [None] * R
        obj_store = [0.0] * R
        round_degenerate = agg_degenerate
        for r in order:
            payload, bits, obj, iters, ops, degen = workers[r].run_inner(p_payload)
            rec.bits_gathered += bits + FLOAT_BITS
            rec.ops += ops
            rec.em_iters.append(iters)
            locals_store[r] = decode_labels(payload, shards[r].num_rows, K)
            obj_store[r] = obj
            round_degenerate = round_degenerate or degen
            ascent_violations += workers[r]._em_result.ascent_violations()
        rec.messages["gather_labels"] = R
        labels = reassemble_labels(locals_store, imap)
        obj = float(sum(obj_store))  # fixed worker order: deterministic sum
        rec.objective = obj
        rec.degenerate = round_degenerate
        degenerate_flags.append(round_degenerate)
        objective_trace.append(obj)
        if cfg.record_labels:
            label_trace.append(labels.copy())
        rounds = s
        fired = False
        if (cfg.split_merge and s < cfg.max_rounds and fires < cfg.split_merge_max
                and s - last_fire >= cfg.split_merge_cooldown):
            pair = redundant_row_pair(params, cfg.split_merge_ratio)
            if pair is not None:
                labels = split_merge_labels(labels, pair,
                                            _perturbation_rng(cfg.seed, s))
                rec.messages["split_merge"] = 1
                fires += 1
                last_fire = s
                fired = True
                prev_obj = None
        ledger.rounds.append(rec)
        if not fired:
            if prev_obj is not None and abs(obj - prev_obj) <= cfg.outer_tol * (abs(prev_obj) + 1.0):
                converged = True
                break
            prev_obj = obj
    return FitResult(labels=labels, params=params, ledger=ledger, rounds=rounds,
                     converged=converged, degenerate_flags=degenerate_flags,
                     ascent_violations=ascent_violations,
                     objective_trace=objective_trace, index_map=imap,
                     label_trace=label_trace)


def run_dpl(g_or_shards, K: int, cfg: FitConfig,
            worker_order: list[int] | None = None) -> FitResult:
    """Multi-round distributed fit of the plain block model."""
    return _run_distributed(g_or_shards, K, cfg, mode="sbm",
                            worker_order=worker_order)


def run_dcpl(g_or_shards, K: int, cfg: FitConfig,
             worker_order: list[int] | None = None) -> FitResult:
    """Degree-corrected variant: spherical init and conditional inner EM."""
    if cfg.init == "scp":
        cfg = FitConfig(**{**cfg.__dict__, "init": "ssc"})
    return _run_distributed(g_or_shards, K, cfg, mode="dcsbm",
                            worker_order=worker_order)


# ---------------------------------------------------------------------------
# Single-machine reference path (no transport, no codec)

def run_single_machine(g: SparseGraph, K: int, cfg: FitConfig,
                       mode: str = "sbm") -> FitResult:
    """The same outer/inner iteration run directly on the whole adjacency,
    used as the R=1 oracle for the distributed path."""
    from .partition import block_split as _split
    imap, shards = _split(g, 1, cfg.seed)
    shard = shards[0]
    labels = _initial_labels([shard], K, mode, cfg)
    ledger = RoundLedger()
    params = None
    prev_obj = None
    converged = False
    degenerate_flags = []
    trace = []
    label_trace = [labels.copy()] if cfg.record_labels else []
    rounds = 0
    violations = 0
    fires, last_fire = 0, -(10 ** 9)
    for s in range(1, cfg.max_rounds + 1):
        O, n_counts = worker_summary(shard, labels, K)
        params, degen = aggregate_global_params([(O, n_counts)], g.num_nodes, mode)
        stats = count_stats(shard, labels, K)
        if mode == "sbm":
            res = em_sbm(stats, ModelParams(pi=params.pi.copy(), lam=params.lam.copy()),
                         tol=cfg.inner_tol, max_iter=cfg.inner_max_iter)
        else:
            res = em_dcsbm(stats, ModelParams(pi=params.pi.copy(), psi=params.psi.copy()),
                           tol=cfg.inner_tol, max_iter=cfg.inner_max_iter)
        violations += res.ascent_violations()
        local = local_label_update(res.tau)
        labels = reassemble_labels([local], imap)
        obj = res.objectives[-1]
        trace.append(obj)
        if cfg.record_labels:
            label_trace.append(labels.copy())
        degenerate_flags.append(degen or res.degenerate)
        rec = RoundRecord(round_index=s, ops=shard.nnz + res.ops,
                          em_iters=[res.n_iters], objective=obj)
        rounds = s
        fired = False
        if (cfg.split_merge and s < cfg.max_rounds and fires < cfg.split_merge_max
                and s - last_fire >= cfg.split_merge_cooldown):
            pair = redundant_row_pair(params, cfg.split_merge_ratio)
            if pair is not None:
                labels = split_merge_labels(labels, pair,
                                            _perturbation_rng(cfg.seed, s))
                rec.messages["split_merge"] = 1
                fires += 1
                last_fire = s
                fired = True
                prev_obj = None
        ledger.rounds.append(rec)
        if not fired:
            if prev_obj is not None and abs(obj - prev_obj) <= cfg.outer_tol * (abs(prev_obj) + 1.0):
                converged = True
                break
            prev_obj = obj
    return FitResult(labels=labels, params=params, ledger=ledger, rounds=rounds,
                     converged=converged, degenerate_flags=degenerate_flags,
                     ascent_violations=violations, objective_trace=trace,
                     index_map=imap, label_trace=label_trace)


# ---------------------------------------------------------------------------
# Scaling report

def _linear_fit_r2(x: np.ndarray, y: np.ndarray) -> tuple[float, float, float]:
    """Least-squares slope/intercept of y on x plus R^2."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    slope, intercept = np.polyfit(x, y, 1)
    pred = slope * x + intercept
    ss_res = float(((y - pred) ** 2).sum())
    ss_tot = float(((y - y.mean()) ** 2).sum())
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    return float(slope), float(intercept), r2


def ledger_scaling_report(settings: list[dict]) -> dict:
    """Given >= 3 runs, each a dict with keys N, n, R, density, and a
    FitResult, fit bits-per-round against N*R and ops-per-round against
    N*n*density."""
    if len(settings) < 3:
        raise ValueError("need at least 3 settings for a scaling fit")
    xs_bits, ys_bits, xs_ops, ys_ops = [], [], [], []
    for st in settings:
        res: FitResult = st["result"]
        nrounds = len(res.ledger.rounds)
        tot = res.ledger.totals()
        xs_bits.append(st["N"] * st["R"])
        ys_bits.append((tot["bits_broadcast"] + tot["bits_gathered"]) / nrounds)
        xs_ops.append(st["N"] * st["n"] * st["density"])
        ys_ops.append(tot["ops"] / nrounds)
    b_slope, b_int, b_r2 = _linear_fit_r2(xs_bits, ys_bits)
    o_slope, o_int, o_r2 = _linear_fit_r2(xs_ops, ys_ops)
    return {
        "bits": {"slope": b_slope, "intercept": b_int, "r2": b_r2,
                 "x": xs_bits, "y": ys_bits},
        "ops": {"slope": o_slope, "intercept": o_int, "r2": o_r2,
                "x": xs_ops, "y": ys_ops},
    }
