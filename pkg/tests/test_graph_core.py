import numpy as np
import pytest

from tempotest.graph_core import (
    EdgeEvent,
    Snapshot,
    TemporalNetwork,
    bin_events,
    edge_density,
    is_connected,
    largest_connected_component,
    read_event_file,
    snapshots_to_events,
    window_bounds,
    write_snapshots,
)
from tempotest.seeding import make_rng, seed_sequence


def _snap(n, edges):
    adj = np.zeros((n, n), dtype=np.uint8)
    for i, j in edges:
        adj[i, j] = adj[j, i] = 1
    return Snapshot(adj)


def test_snapshot_validation():
    with pytest.raises(ValueError):
        Snapshot(np.zeros((2, 3)))
    bad = np.zeros((3, 3))
    bad[0, 1] = 2
    bad[1, 0] = 2
    with pytest.raises(ValueError):
        Snapshot(bad)
    asym = np.zeros((3, 3))
    asym[0, 1] = 1
    with pytest.raises(ValueError):
        Snapshot(asym)
    loop = np.eye(3)
    with pytest.raises(ValueError):
        Snapshot(loop)


def test_snapshot_is_read_only():
    s = _snap(3, [(0, 1)])
    with pytest.raises(ValueError):
        s.adj[0, 2] = 1


def test_snapshot_accessors():
    s = _snap(4, [(0, 1), (1, 2)])
    assert s.n == 4
    assert s.num_edges == 2
    assert s.degrees().tolist() == [1, 2, 1, 0]
    got = {tuple(e) for e in s.edges()}
    assert got == {(0, 1), (1, 2)}
    rt = Snapshot.from_edges(4, s.edges())
    assert np.array_equal(np.asarray(rt.adj), np.asarray(s.adj))
    sp = s.to_sparse()
    assert sp.nnz == 4  # both triangles


def test_empty_snapshot():
    s = Snapshot.empty(5)
    assert s.num_edges == 0
    assert s.n == 5


def test_edge_density():
    s = _snap(4, [(0, 1), (1, 2)])
    assert edge_density(s) == 2 / 6
    with pytest.raises(ValueError):
        edge_density(Snapshot.empty(1))


def test_is_connected():
    assert is_connected(_snap(3, [(0, 1), (1, 2)]))
    assert not is_connected(_snap(3, [(0, 1)]))
    assert is_connected(_snap(1, []))


def test_largest_connected_component_picks_biggest():
    s = _snap(5, [(0, 1), (2, 3), (3, 4)])
    lcc, nodes = largest_connected_component(s)
    assert lcc.n == 3
    assert nodes.tolist() == [2, 3, 4]


def test_largest_connected_component_tie_prefers_lowest_node():
    # two components of size 2: {0,1} and {2,3}
    s = _snap(4, [(0, 1), (2, 3)])
    lcc, nodes = largest_connected_component(s)
    assert nodes.tolist() == [0, 1]
    assert lcc.num_edges == 1


def test_temporal_network_validation():
    a = _snap(3, [(0, 1)])
    b = _snap(4, [(0, 1)])
    with pytest.raises(ValueError):
        TemporalNetwork((a, b))
    net = TemporalNetwork((a, a))
    assert net.T == 2
    assert net.n == 3
    assert net[1] is a
    assert len(list(net)) == 2


def test_window_bounds():
    w = window_bounds(0.0, 10.0, 4)
    assert w.shape == (4, 2)
    assert w[0].tolist() == [0.0, 2.5]
    assert w[3].tolist() == [7.5, 10.0]


def test_bin_events_basic():
    events = [
        EdgeEvent(0, 1, 0.0),
        EdgeEvent(1, 2, 4.9),
        EdgeEvent(2, 3, 5.0),
        EdgeEvent(0, 3, 10.0),  # at t_max: goes to the last (closed) window
        EdgeEvent(1, 1, 2.0),  # self-loop dropped
    ]
    net = bin_events(events, 2, n=4)
    assert net.T == 2
    assert net[0].num_edges == 2
    assert {tuple(e) for e in net[1].edges()} == {(2, 3), (0, 3)}


def test_bin_events_single_window():
    events = [EdgeEvent(0, 1, 3.0), EdgeEvent(1, 2, 3.0)]
    net = bin_events(events, 1, n=3)
    assert net.T == 1
    assert net[0].num_edges == 2


def test_bin_events_errors():
    with pytest.raises(ValueError):
        bin_events([], 2, n=3)
    with pytest.raises(ValueError):
        bin_events([EdgeEvent(0, 0, 1.0)], 1, n=2)  # only self-loops
    # zero time range cannot be split into 2 windows
    ev = [EdgeEvent(0, 1, 5.0), EdgeEvent(1, 2, 5.0)]
    with pytest.raises(ValueError):
        bin_events(ev, 2, n=3)
    with pytest.raises(ValueError):
        bin_events(ev, 0, n=3)


def test_bin_events_duplicate_events_collapse():
    ev = [EdgeEvent(0, 1, 0.0), EdgeEvent(0, 1, 0.1), EdgeEvent(1, 0, 0.2), EdgeEvent(0, 2, 9.9)]
    net = bin_events(ev, 2, n=3)
    assert net[0].num_edges == 1


def test_snapshots_to_events_round_trip():
    rng = make_rng(seed_sequence(50))
    snaps = []
    for t in range(4):
        adj = np.zeros((6, 6), dtype=np.uint8)
        iu = np.triu_indices(6, 1)
        draw = rng.random(len(iu[0])) < 0.4
        adj[iu[0][draw], iu[1][draw]] = 1
        adj |= adj.T
        snaps.append(Snapshot(adj))
    net = TemporalNetwork(tuple(snaps))
    events = snapshots_to_events(net)
    back = bin_events(events, net.T, n=net.n)
    for a, b in zip(net, back):
        assert np.array_equal(np.asarray(a.adj), np.asarray(b.adj))


def test_read_event_file_plain(tmp_path):
    p = tmp_path / "ev.txt"
    p.write_text("# comment\n0 1 10\n1 2 20\n\n2 0 30\n")
    events, n, mapping = read_event_file(p)
    assert n == 3
    assert mapping is None
    assert len(events) == 3
    assert events[0] == EdgeEvent(0, 1, 10.0)


def test_read_event_file_commas_and_gaps(tmp_path):
    p = tmp_path / "ev.csv"
    p.write_text("100,200,1.5\n200,300,2.5\n")
    events, n, mapping = read_event_file(p)
    # ids are not dense, so nodes are relabeled in first-seen order
    assert n == 3
    assert mapping == {"100": 0, "200": 1, "300": 2}
    assert events[1] == EdgeEvent(1, 2, 2.5)


def test_read_event_file_string_ids(tmp_path):
    p = tmp_path / "ev.txt"
    p.write_text("alice bob 1\nbob carol 2\n")
    events, n, mapping = read_event_file(p)
    assert n == 3
    assert mapping["alice"] == 0


def test_read_event_file_reports_line_number(tmp_path):
    p = tmp_path / "bad.txt"
    p.write_text("0 1 10\n0 1\n")
    with pytest.raises(ValueError, match="line 2"):
        read_event_file(p)


def test_write_snapshots_round_trip(tmp_path):
    net = bin_events([EdgeEvent(0, 1, 0.0), EdgeEvent(1, 2, 1.0)], 2, n=3)
    paths = write_snapshots(net, tmp_path)
    assert len(paths) == 2
    text = (tmp_path / "snapshot_000.txt").read_text()
    assert text.startswith("# n=3")
    lines = [l for l in text.splitlines() if not l.startswith("#")]
    assert lines == ["0 1"]


def test_seed_sequence_paths_are_distinct():
    a = make_rng(seed_sequence(1, 0)).random(4)
    b = make_rng(seed_sequence(1, 1)).random(4)
    c = make_rng(seed_sequence(1, 0)).random(4)
    assert np.array_equal(a, c)
    assert not np.array_equal(a, b)


def test_seed_sequence_rejects_negative_path():
    with pytest.raises(ValueError):
        seed_sequence(1, -2)


def test_make_rng_generator_passthrough():
    rng = make_rng(3)
    assert make_rng(rng) is rng
    with pytest.raises(TypeError):
        make_rng(rng, 1)
