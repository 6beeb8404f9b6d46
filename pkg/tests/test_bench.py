import numpy as np

from distsbm.bench import (ExperimentSpec, example3_theta, random_split_shards,
                           run_ablation, run_example1)
from distsbm.partition import block_split

from conftest import planted


def test_example3_theta_values():
    th = example3_theta()
    assert np.allclose(np.diag(th), [9e-3, 12e-3, 15e-3])
    assert th[0, 1] == 3e-3
    assert np.array_equal(th, th.T)


def test_random_split_keeps_only_in_block_columns():
    net = planted(N=120, seed=0)
    imap, shards = random_split_shards(net.graph, 3, seed=0)
    full_imap, full_shards = block_split(net.graph, 3, seed=0)
    assert np.array_equal(imap.block_of, full_imap.block_of)
    for sh, full in zip(shards, full_shards):
        members = set(sh.members.tolist())
        assert all(c in members for c in sh.col_indices.tolist())
        assert sh.nnz <= full.nnz


def test_example1_smoke(tmp_path):
    spec = ExperimentSpec(replications=1, base_seed=0,
                          out_dir=str(tmp_path), make_plots=False)
    rows = run_example1(spec, n_grid=(100,), N_grid=(600,))
    assert (tmp_path / "example1.csv").exists()
    assert any(r[1] == "pl-oracle" for r in rows)
    header = (tmp_path / "example1.csv").read_text().splitlines()[0]
    assert header == "x,method,case,N,seed,nmi,wall_s"


def test_ablation_smoke(tmp_path):
    spec = ExperimentSpec(replications=1, base_seed=1,
                          out_dir=str(tmp_path), make_plots=False)
    rows = run_ablation(spec, N=600, n=200)
    assert (tmp_path / "ablation.csv").exists()
    combos = {(r[0], r[1]) for r in rows}
    assert combos == {("block-wise", "one-shot"), ("block-wise", "multi-round"),
                      ("random", "one-shot"), ("random", "multi-round")}
