import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from distsbm.partition import (block_split, reassemble_labels, scatter_labels,
                               shard_coverage_check, write_partition_file)

from conftest import dense_adjacency, planted


def test_split_requires_divisible_worker_count(small_net):
    with pytest.raises(ValueError) as exc:
        block_split(small_net.graph, 7, seed=0)
    assert "divide" in str(exc.value).lower() or "divisor" in str(exc.value).lower()


@pytest.mark.parametrize("R", [1, 2, 5, 10])
def test_shards_stack_back_to_adjacency(R, small_net):
    g = small_net.graph
    imap, shards = block_split(g, R, seed=3)
    A = dense_adjacency(g)
    seen = np.zeros(g.num_nodes, dtype=bool)
    for sh in shards:
        for i_local, i_global in enumerate(sh.members):
            row = np.zeros(g.num_nodes, dtype=np.int64)
            s, e = sh.row_offsets[i_local], sh.row_offsets[i_local + 1]
            row[sh.col_indices[s:e]] = 1
            assert np.array_equal(row, A[i_global])
            seen[i_global] = True
    assert seen.all()


def test_index_map_is_a_permutation(small_net):
    imap, _ = block_split(small_net.graph, 5, seed=9)
    imap.validate()
    members = np.concatenate([imap.members[r] for r in range(5)])
    assert np.array_equal(np.sort(members), np.arange(small_net.graph.num_nodes))


@given(seed=st.integers(0, 10_000), R=st.sampled_from([1, 2, 3, 4, 6, 12]))
@settings(max_examples=50, deadline=None)
def test_scatter_gather_identity(seed, R):
    net = planted(N=120, seed=seed % 17)
    imap, _ = block_split(net.graph, R, seed)
    rng = np.random.default_rng(seed)
    labels = rng.integers(1, 5, net.graph.num_nodes)
    assert np.array_equal(reassemble_labels(scatter_labels(labels, imap), imap),
                          labels)


def test_splits_differ_by_seed(small_net):
    a, _ = block_split(small_net.graph, 5, seed=0)
    b, _ = block_split(small_net.graph, 5, seed=1)
    assert not np.array_equal(a.members[0], b.members[0])
    c, _ = block_split(small_net.graph, 5, seed=0)
    assert np.array_equal(a.members[0], c.members[0])


def test_shard_coverage_check(small_net):
    imap, _ = block_split(small_net.graph, 4, seed=2)
    covered = shard_coverage_check(imap, small_net.truth, K=3)
    assert covered.shape == (4,)
    assert covered.dtype == bool


def test_partition_file_format(tmp_path, small_net):
    imap, _ = block_split(small_net.graph, 3, seed=11)
    p = tmp_path / "part.txt"
    write_partition_file(imap, seed=11, path=p)
    lines = p.read_text().strip().splitlines()
    R, n, seed = map(int, lines[0].split())
    assert (R, n, seed) == (3, small_net.graph.num_nodes // 3, 11)
    assert len(lines) == small_net.graph.num_nodes + 1
    node, r, w = map(int, lines[1].split())
    assert imap.block_of[node] == r and imap.local_of[node] == w
