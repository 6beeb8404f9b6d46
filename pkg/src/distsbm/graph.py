"""Sparse symmetric graph storage and edge-list ingestion."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class EdgeListParseError(ValueError):
    """Raised when an edge-list file contains a malformed line."""

    def __init__(self, path, line_number, line):
        self.path = path
        self.line_number = line_number
        super().__init__(f"{path}:{line_number}: malformed edge line {line!r}")


@dataclass(frozen=True)
class SparseGraph:
    """Symmetric binary adjacency in CSR form. Immutable after construction.

    Neighbor lists are sorted ascending, contain no self loops, and are
    symmetric: j in neighbors(i) iff i in neighbors(j).
    """

    num_nodes: int
    row_offsets: np.ndarray  # int64, length num_nodes + 1
    col_indices: np.ndarray  # int64, neighbor lists
    num_edges: int  # undirected edge count

    def __post_init__(self):
        self.row_offsets.setflags(write=False)
        self.col_indices.setflags(write=False)

    def neighbors(self, i: int) -> np.ndarray:
        return self.col_indices[self.row_offsets[i]:self.row_offsets[i + 1]]

    @property
    def degrees(self) -> np.ndarray:
        return np.diff(self.row_offsets)

    @property
    def nnz(self) -> int:
        return int(self.col_indices.size)

    def edge_pairs(self) -> tuple[np.ndarray, np.ndarray]:
        """Each undirected edge once, as (u, v) arrays with u < v."""
        u = np.repeat(np.arange(self.num_nodes), self.degrees)
        v = self.col_indices
        keep = u < v
        return u[keep], v[keep]

    def validate(self) -> None:
        n = self.num_nodes
        assert self.row_offsets.shape == (n + 1,)
        assert self.row_offsets[0] == 0
        assert self.row_offsets[-1] == self.col_indices.size
        if self.col_indices.size:
            assert self.col_indices.min() >= 0
            assert self.col_indices.max() < n
        deg = self.degrees
        for i in range(n):
            row = self.neighbors(i)
            assert np.all(np.diff(row) > 0), f"row {i} not strictly increasing"
            assert i not in row, f"self loop at {i}"
        assert deg.sum() == 2 * self.num_edges
        # symmetry
        u = np.repeat(np.arange(n), deg)
        fwd = set(zip(u.tolist(), self.col_indices.tolist()))
        assert all((b, a) in fwd for a, b in fwd), "adjacency not symmetric"


@dataclass(frozen=True)
class DegreeSummary:
    per_node_degree: np.ndarray
    density: float
    average_degree: float
    num_dropped_self_loops: int = 0


@dataclass
class LoadResult:
    graph: SparseGraph
    original_ids: np.ndarray  # compact id -> original id
    num_dropped_self_loops: int = 0
    num_duplicate_edges: int = 0


def build_graph(u: np.ndarray, v: np.ndarray, num_nodes: int) -> tuple[SparseGraph, int, int]:
    """Build a symmetric graph from (possibly dirty) edge endpoint arrays.

    Symmetrizes by union, drops self loops, deduplicates. Returns the graph
    plus counts of dropped self loops and duplicate edges.
    """
    u = np.asarray(u, dtype=np.int64)
    v = np.asarray(v, dtype=np.int64)
    loops = u == v
    n_loops = int(loops.sum())
    u, v = u[~loops], v[~loops]
    lo = np.minimum(u, v)
    hi = np.maximum(u, v)
    keys = lo * num_nodes + hi
    uniq = np.unique(keys)
    n_dup = int(keys.size - uniq.size)
    lo = uniq // num_nodes
    hi = uniq % num_nodes
    num_edges = int(uniq.size)
    src = np.concatenate([lo, hi])
    dst = np.concatenate([hi, lo])
    order = np.lexsort((dst, src))
    src, dst = src[order], dst[order]
    counts = np.bincount(src, minlength=num_nodes)
    row_offsets = np.concatenate([[0], np.cumsum(counts)]).astype(np.int64)
    g = SparseGraph(num_nodes=num_nodes, row_offsets=row_offsets,
                    col_indices=dst.astype(np.int64), num_edges=num_edges)
    return g, n_loops, n_dup


def load_edge_list(path) -> LoadResult:
    """Load a SNAP-style whitespace-separated edge list.

    Lines starting with '#' are comments. Node ids are compacted to a dense
    0-based range; the original-id map is returned alongside.
    """
    us, vs = [], []
    n_lines = 0
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            parts = stripped.split()
            if len(parts) != 2:
                raise EdgeListParseError(path, lineno, line.rstrip("\n"))
            try:
                a, b = int(parts[0]), int(parts[1])
            except ValueError:
                raise EdgeListParseError(path, lineno, line.rstrip("\n")) from None
            us.append(a)
            vs.append(b)
            n_lines += 1
    if n_lines == 0:
        raise ValueError(f"{path}: empty edge list")
    u = np.asarray(us, dtype=np.int64)
    v = np.asarray(vs, dtype=np.int64)
    original_ids, inverse = np.unique(np.concatenate([u, v]), return_inverse=True)
    u = inverse[: u.size]
    v = inverse[u.size:]
    g, n_loops, n_dup = build_graph(u, v, num_nodes=int(original_ids.size))
    return LoadResult(graph=g, original_ids=original_ids,
                      num_dropped_self_loops=n_loops, num_duplicate_edges=n_dup)


def write_edge_list(g: SparseGraph, path, original_ids: np.ndarray | None = None) -> None:
    """Write each undirected edge once as 'u<TAB>v'."""
    u, v = g.edge_pairs()
    if original_ids is not None:
        u, v = original_ids[u], original_ids[v]
    with open(path, "w", encoding="utf-8") as fh:
        for a, b in zip(u.tolist(), v.tolist()):
            fh.write(f"{a}\t{b}\n")


def degree_summary(g: SparseGraph) -> DegreeSummary:
    if g.num_nodes < 2:
        raise ValueError("density undefined for graphs with fewer than 2 nodes")
    n = g.num_nodes
    density = 2.0 * g.num_edges / (n * (n - 1))
    deg = g.degrees
    return DegreeSummary(per_node_degree=deg, density=density,
                         average_degree=float(deg.mean()))
