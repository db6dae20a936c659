import itertools

import numpy as np
import pytest

from tempotest.community import (
    Partition,
    default_k_max,
    e2d2,
    fast_greedy_k,
    greedy_e2d2_max,
    modularity,
    write_partition_csv,
)
from tempotest.generators import planted_block_matrix, sample_er, sample_sbm, split_labels
from tempotest.graph_core import Snapshot, is_connected, largest_connected_component
from tempotest.seeding import make_rng, seed_sequence


def _snap(n, edges):
    adj = np.zeros((n, n), dtype=np.uint8)
    for i, j in edges:
        adj[i, j] = adj[j, i] = 1
    return Snapshot(adj)


def _two_cliques(k, bridge=True):
    edges = list(itertools.combinations(range(k), 2))
    edges += [(i + k, j + k) for i, j in itertools.combinations(range(k), 2)]
    if bridge:
        edges.append((k - 1, k))
    return _snap(2 * k, edges)


def _all_partitions(n):
    # all set partitions of range(n) as label arrays
    if n == 0:
        yield np.zeros(0, dtype=np.int64)
        return
    labels = np.zeros(n, dtype=np.int64)

    def rec(i, kmax):
        if i == n:
            yield labels.copy()
            return
        for g in range(kmax + 1):
            labels[i] = g
            yield from rec(i + 1, max(kmax, g + 1))

    yield from rec(1, 1)


def test_partition_validation():
    Partition(np.array([0, 1, 0]))
    with pytest.raises(ValueError):
        Partition(np.array([0, 2, 0]))  # group 1 empty
    with pytest.raises(ValueError):
        Partition(np.array([1, 2]))  # not 0-based
    p = Partition.dense(np.array([5, 5, 9, 5]))
    assert p.labels.tolist() == [0, 0, 1, 0]
    assert p.k == 2
    assert p.sizes().tolist() == [3, 1]


def test_default_k_max():
    assert default_k_max(8) == 2
    assert default_k_max(100) == 10
    assert default_k_max(99) == 9


def test_modularity_hand_value():
    # two triangles joined by one edge: known Q for the two-clique split
    s = _two_cliques(3)
    part = Partition(np.array([0, 0, 0, 1, 1, 1]))
    m = s.num_edges  # 7
    # Q = sum_c (w_in/m - (d_c/2m)^2); each clique: w_in=3, d_c=7
    q_expected = 2 * (3 / 7 - (7 / 14) ** 2)
    assert modularity(s, part) == pytest.approx(q_expected, abs=1e-12)
    with pytest.raises(ValueError):
        modularity(Snapshot.empty(3), Partition(np.zeros(3, dtype=np.int64)))


def test_modularity_all_in_one_is_zero():
    g = sample_er(30, 0.2, make_rng(seed_sequence(30)))
    q = modularity(g, Partition(np.zeros(30, dtype=np.int64)))
    assert q == pytest.approx(0.0, abs=1e-12)


def test_fast_greedy_recovers_two_cliques():
    s = _two_cliques(5)
    part = fast_greedy_k(s, k_max=3)
    assert part.k == 2
    assert len(set(part.labels[:5])) == 1
    assert len(set(part.labels[5:])) == 1
    # matches the exhaustive modularity maximum over 2-part splits
    best_q = max(
        modularity(s, Partition.dense(lab))
        for lab in _all_partitions(10)
        if len(set(lab.tolist())) == 2
    )
    assert modularity(s, part) == pytest.approx(best_q, abs=1e-12)


def test_fast_greedy_complete_graph_single_group():
    s = _snap(6, list(itertools.combinations(range(6), 2)))
    part = fast_greedy_k(s, k_max=2)
    assert part.k == 1
    # brute force: no partition of K6 has positive modularity
    best = max(modularity(s, Partition.dense(lab)) for lab in _all_partitions(6))
    assert best <= 1e-12


def test_fast_greedy_k_max_binds():
    s = _two_cliques(5)
    part = fast_greedy_k(s, k_max=1)
    assert part.k == 1
    g = sample_er(40, 0.15, make_rng(seed_sequence(31)))
    if not is_connected(g):
        g, _ = largest_connected_component(g)
    for k_max in (1, 2, 3, 5):
        assert fast_greedy_k(g, k_max=k_max).k <= k_max


def test_fast_greedy_rejects_disconnected():
    s = _snap(4, [(0, 1), (2, 3)])
    with pytest.raises(ValueError):
        fast_greedy_k(s, k_max=2)
    with pytest.raises(ValueError):
        greedy_e2d2_max(s, 2)


def test_e2d2_hand_value():
    s = _snap(4, [(0, 1), (2, 3)])
    u = e2d2(s, Partition(np.array([0, 0, 1, 1])))
    assert u == 1.5


def test_e2d2_label_permutation_invariant():
    g = sample_er(25, 0.3, make_rng(seed_sequence(32)))
    labels = make_rng(seed_sequence(33)).integers(0, 3, size=25)
    labels[:3] = [0, 1, 2]
    u1 = e2d2(g, Partition.dense(labels))
    u2 = e2d2(g, Partition.dense(2 - labels))  # swap group ids
    assert u1 == u2


def test_e2d2_sign_conventions():
    # all edges between the groups -> negative U
    s = _snap(4, [(0, 2), (0, 3), (1, 2), (1, 3)])
    assert e2d2(s, Partition(np.array([0, 0, 1, 1]))) < 0
    # random labels on an ER graph: small |U| on average
    vals = []
    for i in range(100):
        g = sample_er(60, 0.2, make_rng(seed_sequence(34, i)))
        lab = make_rng(seed_sequence(35, i)).integers(0, 2, size=60)
        lab[:2] = [0, 1]
        vals.append(e2d2(g, Partition.dense(lab)))
    assert abs(np.mean(vals)) < 0.02


def test_e2d2_errors():
    g = sample_er(10, 0.5, make_rng(seed_sequence(36)))
    with pytest.raises(ValueError):
        e2d2(g, Partition(np.zeros(10, dtype=np.int64)))  # K=1
    with pytest.raises(ValueError):
        e2d2(Snapshot.empty(4), Partition(np.array([0, 0, 1, 1])))  # no edges
    with pytest.raises(ValueError):
        e2d2(g, Partition(np.arange(4)))  # size mismatch
    # K=n leaves no intra pair
    with pytest.raises(ValueError):
        e2d2(g, Partition(np.arange(10)))


def test_greedy_e2d2_max_improves_on_init():
    for i in range(10):
        g = sample_er(40, 0.2, make_rng(seed_sequence(37, i)))
        if not is_connected(g):
            g, _ = largest_connected_component(g)
        k_max = default_k_max(g.n)
        init = fast_greedy_k(g, k_max)
        part, u = greedy_e2d2_max(g, k_max)
        if init.k >= 2:
            assert u >= e2d2(g, init)
        assert part.k >= 2
        assert u == e2d2(g, part)


def test_greedy_e2d2_max_fixpoint_unchanged():
    # two cliques joined by an edge: the clique split is a local max
    s = _two_cliques(5)
    part, u = greedy_e2d2_max(s, 3)
    expected = e2d2(s, Partition(np.array([0] * 5 + [1] * 5)))
    assert u == expected


def test_greedy_e2d2_max_recovers_planted_sbm():
    labels = split_labels(100, 0.5)
    B = np.array([[0.5, 0.05], [0.05, 0.5]])
    g = sample_sbm(labels, B, make_rng(seed_sequence(38)))
    if not is_connected(g):
        g, idx = largest_connected_component(g)
        labels = labels[idx]
    part, u = greedy_e2d2_max(g, default_k_max(g.n))
    u_true = e2d2(g, Partition.dense(labels))
    assert u >= 0.95 * u_true


def test_greedy_e2d2_matches_exhaustive_bipartitions():
    # frozen seeds where hill-climbing attains the global bipartition max
    for i in range(3):
        g = sample_er(8, 0.5, make_rng(seed_sequence(8021, i)))
        assert is_connected(g)
        part, u = greedy_e2d2_max(g, default_k_max(8))
        best = -np.inf
        for bits in range(1, 2 ** 7):
            lab = np.array([0] + [(bits >> b) & 1 for b in range(7)])
            try:
                best = max(best, e2d2(g, Partition.dense(lab)))
            except ValueError:
                continue
        assert u == best


def test_write_partition_csv(tmp_path):
    part = Partition(np.array([0, 1, 0]))
    path = tmp_path / "part.csv"
    write_partition_csv(part, path)
    assert path.read_text() == "node_id,group\n0,0\n1,1\n2,0\n"
