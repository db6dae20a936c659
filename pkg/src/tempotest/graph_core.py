"""Graph representations and ingestion of timestamped edge lists.

A Snapshot is a simple undirected graph (binary, no self-loops) on nodes
0..n-1 stored as a dense adjacency matrix.  A TemporalNetwork is an ordered
sequence of snapshots on a common node set.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components


class EdgeEvent(NamedTuple):
    """A timestamped interaction between two nodes."""

    i: int
    j: int
    t: float


@dataclass(frozen=True)
class Snapshot:
    """Undirected simple graph on nodes 0..n-1.

    adj is a symmetric 0/1 matrix with zero diagonal; it is stored as a
    read-only uint8 array so snapshots can be shared freely.
    """

    adj: np.ndarray

    def __post_init__(self):
        adj = np.ascontiguousarray(self.adj)
        if adj.ndim != 2 or adj.shape[0] != adj.shape[1]:
            raise ValueError("adjacency must be a square matrix")
        if adj.shape[0] == 0:
            raise ValueError("empty graph (n=0)")
        if adj.dtype != np.uint8:
            vals = np.unique(adj)
            if not np.isin(vals, (0, 1)).all():
                raise ValueError("adjacency entries must be 0 or 1")
            adj = adj.astype(np.uint8)
        elif adj.max(initial=0) > 1:
            raise ValueError("adjacency entries must be 0 or 1")
        if np.diagonal(adj).any():
            raise ValueError("self-loops are not allowed")
        if not np.array_equal(adj, adj.T):
            raise ValueError("adjacency must be symmetric")
        adj.flags.writeable = False
        object.__setattr__(self, "adj", adj)

    @property
    def n(self) -> int:
        return self.adj.shape[0]

    @property
    def num_edges(self) -> int:
        return int(self.adj.sum()) // 2

    def degrees(self) -> np.ndarray:
        return self.adj.sum(axis=1, dtype=np.int64)

    def to_sparse(self) -> csr_matrix:
        return csr_matrix(self.adj)

    def edges(self) -> np.ndarray:
        """Edge list as an (m, 2) array of pairs i < j."""
        iu, ju = np.nonzero(np.triu(self.adj, k=1))
        return np.column_stack([iu, ju])

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Snapshot":
        if n < 1:
            raise ValueError("empty graph (n=0)")
        adj = np.zeros((n, n), dtype=np.uint8)
        for i, j in edges:
            if i == j:
                raise ValueError(f"self-loop ({i},{i}) not allowed")
            if not (0 <= i < n and 0 <= j < n):
                raise ValueError(f"node id out of range: ({i},{j}) with n={n}")
            adj[i, j] = 1
            adj[j, i] = 1
        return cls(adj)

    @classmethod
    def empty(cls, n: int) -> "Snapshot":
        return cls(np.zeros((n, n), dtype=np.uint8))


@dataclass(frozen=True)
class TemporalNetwork:
    """Ordered sequence of snapshots sharing a node set."""

    snapshots: tuple

    def __post_init__(self):
        snaps = tuple(self.snapshots)
        if len(snaps) == 0:
            raise ValueError("a temporal network needs at least one snapshot")
        n = snaps[0].n
        for t, s in enumerate(snaps):
            if s.n != n:
                raise ValueError(f"snapshot {t} has {s.n} nodes, expected {n}")
        object.__setattr__(self, "snapshots", snaps)

    @property
    def T(self) -> int:
        return len(self.snapshots)

    @property
    def n(self) -> int:
        return self.snapshots[0].n

    def __iter__(self):
        return iter(self.snapshots)

    def __getitem__(self, t):
        return self.snapshots[t]


def edge_density(s: Snapshot) -> float:
    """Fraction of ordered node pairs joined by an edge: 2m / (n(n-1))."""
    if s.n < 2:
        raise ValueError("edge density needs n >= 2")
    return float(s.adj.sum()) / (s.n * (s.n - 1))


def is_connected(s: Snapshot) -> bool:
    ncomp, _ = connected_components(s.to_sparse(), directed=False)
    return ncomp == 1


def largest_connected_component(s: Snapshot) -> tuple[Snapshot, np.ndarray]:
    """Induced subgraph on the largest component, plus new->original id map.

    Ties between equal-size components go to the one containing the
    smallest original node id.
    """
    ncomp, comp = connected_components(s.to_sparse(), directed=False)
    if ncomp == 1:
        return s, np.arange(s.n)
    sizes = np.bincount(comp, minlength=ncomp)
    candidates = np.flatnonzero(sizes == sizes.max())
    # tie rule: among equal-size components take the one containing the
    # smallest original node id
    best = min(candidates, key=lambda c: np.flatnonzero(comp == c).min())
    keep = np.flatnonzero(comp == best)
    sub = s.adj[np.ix_(keep, keep)].copy()
    return Snapshot(sub), keep


def window_bounds(t_min: float, t_max: float, T: int) -> np.ndarray:
    """(T, 2) array of equal-width window bounds covering [t_min, t_max]."""
    edges = np.linspace(t_min, t_max, T + 1)
    return np.column_stack([edges[:-1], edges[1:]])


def bin_events(events: Sequence[EdgeEvent], T: int, n: int) -> TemporalNetwork:
    """Bin timestamped events into T equal-width snapshots.

    Windows are half-open on the right except the last, which is closed so
    the latest event is kept.  Self-loop events are dropped; multiple events
    for a pair within one window collapse to a single edge.
    """
    if T < 1:
        raise ValueError("T must be >= 1")
    if len(events) == 0:
        raise ValueError("empty event list")
    ii = np.array([e.i for e in events], dtype=np.int64)
    jj = np.array([e.j for e in events], dtype=np.int64)
    tt = np.array([e.t for e in events], dtype=np.float64)
    if ii.min() < 0 or jj.min() < 0 or ii.max() >= n or jj.max() >= n:
        raise ValueError("node id out of range [0, n)")
    valid = ii != jj
    if not valid.any():
        raise ValueError("no valid events: all events are self-loops")
    ii, jj, tt = ii[valid], jj[valid], tt[valid]
    t_min, t_max = tt.min(), tt.max()
    if t_max == t_min:
        if T > 1:
            raise ValueError("all events share one timestamp; cannot split into T>1 windows")
        idx = np.zeros(len(tt), dtype=np.int64)
    else:
        idx = np.floor((tt - t_min) / (t_max - t_min) * T).astype(np.int64)
        np.clip(idx, 0, T - 1, out=idx)
    adjs = np.zeros((T, n, n), dtype=np.uint8)
    adjs[idx, ii, jj] = 1
    adjs[idx, jj, ii] = 1
    return TemporalNetwork(tuple(Snapshot(a) for a in adjs))


def snapshots_to_events(net: TemporalNetwork) -> list[EdgeEvent]:
    """Flatten a temporal network into events with t = snapshot index."""
    out = []
    for t, s in enumerate(net):
        for i, j in s.edges():
            out.append(EdgeEvent(int(i), int(j), float(t)))
    return out


def read_event_file(path) -> tuple[list[EdgeEvent], int, dict | None]:
    """Parse a timestamped edge list: `src dst timestamp` per line.

    Fields may be separated by whitespace or commas; lines starting with `#`
    are skipped.  If the node tokens are exactly the integers 0..max they are
    used directly (n = max id + 1); otherwise all ids are relabeled densely
    in first-seen order and the mapping is returned.  Relabeling avoids
    phantom isolated nodes from gappy or 1-based id spaces, which would bias
    every density-based statistic downstream.
    """
    rows = []
    with open(path) as fh:
        for ln, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.replace(",", " ").split()
            if len(parts) < 3:
                raise ValueError(f"{path}: line {ln}: expected `src dst timestamp`")
            try:
                t = float(parts[2])
            except ValueError:
                raise ValueError(f"{path}: line {ln}: bad timestamp {parts[2]!r}") from None
            rows.append((parts[0], parts[1], t, ln))
    if not rows:
        raise ValueError(f"{path}: no events found")

    def _as_id(tok):
        try:
            v = int(tok)
        except ValueError:
            return None
        return v if v >= 0 else None

    ids = [_as_id(a) for a, b, _, _ in rows] + [_as_id(b) for a, b, _, _ in rows]
    if all(v is not None for v in ids) and set(ids) == set(range(max(ids) + 1)):
        events = [EdgeEvent(int(a), int(b), t) for a, b, t, _ in rows]
        n = max(ids) + 1
        return events, n, None
    mapping: dict = {}
    events = []
    for a, b, t, _ in rows:
        for tok in (a, b):
            if tok not in mapping:
                mapping[tok] = len(mapping)
        events.append(EdgeEvent(mapping[a], mapping[b], t))
    return events, len(mapping), mapping


def write_snapshots(net: TemporalNetwork, out_dir, bounds=None) -> list:
    """Write one edge-list file per snapshot into out_dir.

    Each file carries a header comment with n and, when given, the time
    window the snapshot covers.  Returns the written paths.
    """
    import os

    os.makedirs(out_dir, exist_ok=True)
    paths = []
    for t, s in enumerate(net):
        path = os.path.join(out_dir, f"snapshot_{t:03d}.txt")
        with open(path, "w") as fh:
            if bounds is not None:
                a, b = bounds[t]
                fh.write(f"# n={s.n} t={t} window=[{a!r},{b!r})\n")
            else:
                fh.write(f"# n={s.n} t={t}\n")
            for i, j in s.edges():
                fh.write(f"{i} {j}\n")
        paths.append(path)
    return paths
