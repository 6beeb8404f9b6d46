"""Block-wise splitting of a graph into worker shards and label reassembly."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import SparseGraph


@dataclass(frozen=True)
class IndexMap:
    """Global <-> local node index bookkeeping for an R-way block split.

    block_of[i] is the worker (1..R) holding node i; local_of[i] is its
    1-based position inside that worker; members[r-1] lists the worker's
    in-worker nodes in local order.
    """

    num_nodes: int
    num_workers: int
    block_of: np.ndarray   # length N, values 1..R
    local_of: np.ndarray   # length N, values 1..n
    members: tuple         # tuple of R int arrays, each length n

    @property
    def worker_size(self) -> int:
        return self.num_nodes // self.num_workers

    def validate(self) -> None:
        N, R = self.num_nodes, self.num_workers
        n = self.worker_size
        seen = np.concatenate(self.members)
        assert seen.size == N and np.array_equal(np.sort(seen), np.arange(N))
        for r, mem in enumerate(self.members, start=1):
            assert mem.size == n
            assert np.all(self.block_of[mem] == r)
            assert np.array_equal(self.local_of[mem], np.arange(1, n + 1))


@dataclass(frozen=True)
class WorkerShard:
    """One worker's n x N sub-adjacency: the rows of A for its in-worker
    nodes, in local order, with global column ids."""

    worker_id: int          # 1..R
    num_rows: int           # n
    num_cols: int           # N
    row_offsets: np.ndarray
    col_indices: np.ndarray
    index_map: IndexMap

    @property
    def members(self) -> np.ndarray:
        return self.index_map.members[self.worker_id - 1]

    @property
    def nnz(self) -> int:
        return int(self.col_indices.size)

    @property
    def row_degrees(self) -> np.ndarray:
        return np.diff(self.row_offsets)


def block_split(g: SparseGraph, R: int, seed: int) -> tuple[IndexMap, list[WorkerShard]]:
    """Assign nodes to R workers by a uniform random permutation chunked into
    consecutive blocks, and slice out each worker's rows of A."""
    N = g.num_nodes
    if R < 1 or R > N:
        raise ValueError(f"number of workers R={R} must be in 1..{N}")
    if N % R != 0:
        valid = [r for r in range(max(1, R - 5), min(N, R + 5) + 1) if N % r == 0]
        raise ValueError(
            f"R={R} does not divide N={N}; pad the graph or pick a divisor of N "
            f"(nearby valid choices: {valid})")
    n = N // R
    rng = np.random.default_rng(seed)
    perm = rng.permutation(N)
    block_of = np.empty(N, dtype=np.int64)
    local_of = np.empty(N, dtype=np.int64)
    members = []
    for r in range(R):
        mem = perm[r * n:(r + 1) * n]
        members.append(mem.copy())
        block_of[mem] = r + 1
        local_of[mem] = np.arange(1, n + 1)
    imap = IndexMap(num_nodes=N, num_workers=R, block_of=block_of,
                    local_of=local_of, members=tuple(members))
    shards = [extract_shard(g, imap, r + 1) for r in range(R)]
    return imap, shards


def extract_shard(g: SparseGraph, imap: IndexMap, worker_id: int) -> WorkerShard:
    mem = imap.members[worker_id - 1]
    starts = g.row_offsets[mem]
    stops = g.row_offsets[mem + 1]
    lengths = stops - starts
    row_offsets = np.concatenate([[0], np.cumsum(lengths)]).astype(np.int64)
    cols = np.concatenate([g.col_indices[a:b] for a, b in zip(starts, stops)]) \
        if mem.size else np.empty(0, dtype=np.int64)
    return WorkerShard(worker_id=worker_id, num_rows=mem.size, num_cols=g.num_nodes,
                       row_offsets=row_offsets, col_indices=np.asarray(cols, dtype=np.int64),
                       index_map=imap)


def reassemble_labels(local_labels: list[np.ndarray], imap: IndexMap) -> np.ndarray:
    """Place worker r's local label vector at that worker's global positions."""
    if len(local_labels) != imap.num_workers:
        raise ValueError(f"expected {imap.num_workers} local vectors, got {len(local_labels)}")
    n = imap.worker_size
    out = np.empty(imap.num_nodes, dtype=np.int64)
    for r, loc in enumerate(local_labels):
        loc = np.asarray(loc)
        if loc.size != n:
            raise ValueError(f"worker {r + 1} local vector has length {loc.size}, expected {n}")
        out[imap.members[r]] = loc
    return out


def scatter_labels(labels: np.ndarray, imap: IndexMap) -> list[np.ndarray]:
    """Inverse of reassemble_labels: per-worker local label vectors."""
    return [np.asarray(labels)[mem].copy() for mem in imap.members]


def shard_coverage_check(imap: IndexMap, truth: np.ndarray, K: int) -> np.ndarray:
    """Per worker: does its in-worker node set contain every label 1..K?"""
    truth = np.asarray(truth)
    out = np.empty(imap.num_workers, dtype=bool)
    for r, mem in enumerate(imap.members):
        present = np.bincount(truth[mem], minlength=K + 1)[1:K + 1]
        out[r] = bool(np.all(present > 0))
    return out


def write_partition_file(imap: IndexMap, seed: int, path) -> None:
    """Header 'R n seed' then one 'node_id r_i w_i' line per node."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"{imap.num_workers} {imap.worker_size} {seed}\n")
        for i in range(imap.num_nodes):
            fh.write(f"{i} {imap.block_of[i]} {imap.local_of[i]}\n")
