import numpy as np
import pytest

import tempotest.e2d2_test as e2
from tempotest.community import Partition, e2d2
from tempotest.e2d2_test import ase_rank1, e2d2_pvalue_bootstrap
from tempotest.generators import (
    chung_lu_scale_for_density,
    sample_chung_lu,
    sample_er,
    sample_sbm,
    split_labels,
)
from tempotest.graph_core import Snapshot, is_connected, largest_connected_component
from tempotest.seeding import make_rng, seed_sequence


def _snap(n, edges):
    adj = np.zeros((n, n), dtype=np.uint8)
    for i, j in edges:
        adj[i, j] = adj[j, i] = 1
    return Snapshot(adj)


def test_ase_rank1_single_edge():
    th = ase_rank1(_snap(2, [(0, 1)]))
    assert th == pytest.approx([1 / np.sqrt(2)] * 2, abs=1e-12)
    assert th[0] * th[1] == pytest.approx(0.5, abs=1e-12)


def test_ase_rank1_complete_graph():
    import itertools

    th = ase_rank1(_snap(4, list(itertools.combinations(range(4), 2))))
    assert th == pytest.approx([np.sqrt(3) / 2] * 4, abs=1e-12)
    assert th[0] * th[1] == pytest.approx(0.75, abs=1e-12)


def test_ase_rank1_positive_on_connected_graphs():
    for i in range(20):
        g = sample_er(50, 0.15, make_rng(seed_sequence(60, i)))
        if not is_connected(g):
            g, _ = largest_connected_component(g)
        th = ase_rank1(g)
        assert th.min() >= 0.0
        assert np.all(np.isfinite(th))
        assert len(th) == g.n


def test_ase_rank1_sign_fixed_for_both_solver_paths():
    # n=100 exercises the iterative path, n=30 the dense one
    for n, p in ((30, 0.3), (100, 0.08)):
        g = sample_er(n, p, make_rng(seed_sequence(61, n)))
        if not is_connected(g):
            g, _ = largest_connected_component(g)
        th = ase_rank1(g)
        assert th.sum() > 0


def test_ase_rank1_edgeless_error():
    with pytest.raises(ValueError):
        ase_rank1(Snapshot.empty(3))


def test_ase_rank1_dense_vs_iterative_agree():
    g = sample_er(120, 0.1, make_rng(seed_sequence(62)))
    if not is_connected(g):
        g, _ = largest_connected_component(g)
    th_it = ase_rank1(g)
    adj = np.asarray(g.adj).astype(np.float64)
    vals, vecs = np.linalg.eigh(adj)
    lam = vals[-1] if abs(vals[-1]) >= abs(vals[0]) else vals[0]
    u = vecs[:, -1] if abs(vals[-1]) >= abs(vals[0]) else vecs[:, 0]
    if u.sum() < 0:
        u = -u
    th_de = np.sqrt(abs(lam)) * u
    th_de[th_de < 0] = 0.0
    assert th_it == pytest.approx(th_de, abs=1e-8)


def test_pvalue_on_grid_and_deterministic():
    g = sample_er(40, 0.3, make_rng(seed_sequence(63)))
    r1 = e2d2_pvalue_bootstrap(g, n_boot=40, seed=5)
    r2 = e2d2_pvalue_bootstrap(g, n_boot=40, seed=5)
    assert r1.pvalue == r2.pvalue
    assert r1.pvalue in {k / 40 for k in range(41)}
    assert r1.u_obs == r2.u_obs
    assert r1.n_boot == 40
    d = r1.diagnostics()
    assert d["u_obs"] == r1.u_obs


def test_pvalue_add_one_correction():
    g = sample_er(40, 0.3, make_rng(seed_sequence(64)))
    plain = e2d2_pvalue_bootstrap(g, n_boot=30, seed=6)
    plus = e2d2_pvalue_bootstrap(g, n_boot=30, seed=6, add_one=True)
    count = round(plain.pvalue * 30)
    assert plus.pvalue == pytest.approx((count + 1) / 31)
    assert plus.add_one


def test_strong_sbm_power_single_seed():
    labels = split_labels(200, 0.5)
    B = np.array([[0.15, 0.02], [0.02, 0.15]])
    g = sample_sbm(labels, B, make_rng(seed_sequence(65)))
    res = e2d2_pvalue_bootstrap(g, n_boot=60, seed=66)
    assert res.pvalue == 0.0


def test_lcc_too_small_error():
    g = _snap(9, [(i, i + 1) for i in range(8)])
    with pytest.raises(ValueError):
        e2d2_pvalue_bootstrap(g, n_boot=10, seed=1)


def test_all_replicates_degenerate_error(monkeypatch):
    g = sample_er(30, 0.3, make_rng(seed_sequence(67)))
    # force every bootstrap replicate's LCC to be trivial
    tiny = _snap(2, [(0, 1)])

    def fake_lcc(s):
        return tiny, np.array([0, 1])

    real_lcc = e2.largest_connected_component
    calls = {"n": 0}

    def patched(s):
        calls["n"] += 1
        if calls["n"] == 1:
            return real_lcc(s)  # the observed graph passes through
        return fake_lcc(s)

    monkeypatch.setattr(e2, "largest_connected_component", patched)
    with pytest.raises(RuntimeError, match="degenerate"):
        e2d2_pvalue_bootstrap(g, n_boot=5, seed=2)


def test_intra_edge_monotonicity():
    # adding an intra-community edge never lowers U at a fixed partition
    rng = make_rng(seed_sequence(68))
    for _ in range(20):
        n = 24
        g = sample_er(n, 0.25, make_rng(rng))
        labels = np.array([0] * 12 + [1] * 12)
        part = Partition(labels)
        adj = np.asarray(g.adj).copy()
        # find a missing intra pair
        candidates = [
            (i, j)
            for i in range(12)
            for j in range(i + 1, 12)
            if adj[i, j] == 0
        ]
        if not candidates:
            continue
        i, j = candidates[int(rng.integers(len(candidates)))]
        u0 = e2d2(g, part)
        adj[i, j] = adj[j, i] = 1
        u1 = e2d2(Snapshot(adj), part)
        assert u1 >= u0


def test_bootstrap_counts_capped_probabilities_and_p_of_one():
    # star: theta_hub = 17**0.25/sqrt(2) > 1, so replicates that resample the
    # hub twice produce a pair probability above 1, which is capped and
    # counted.  The star itself has weaker community structure than its
    # Chung-Lu replicates, so every bootstrap U beats the observed one.
    n = 18
    adj = np.zeros((n, n), dtype=np.uint8)
    adj[0, 1:] = 1
    adj[1:, 0] = 1
    g = Snapshot(adj)
    res = e2d2_pvalue_bootstrap(g, n_boot=8, seed=0)
    assert res.n_capped_probs > 0
    assert res.pvalue == 1.0
