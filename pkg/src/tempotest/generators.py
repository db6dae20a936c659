"""Random network samplers: ER / SBM / Chung-Lu nulls and the three
temporal alternatives (correlated SBM, dynamic SBM, dynamic DCBM).

All samplers accept `seed` as an int, numpy SeedSequence, Generator, or
None.  Temporal samplers derive one sub-stream per (role, snapshot index),
where role 0 draws edges, 1 draws community labels, and 2 draws degree
weights, so outputs are reproducible and order-independent.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import kernels
from .graph_core import Snapshot, TemporalNetwork
from .seeding import make_rng, seed_sequence

_EDGES, _LABELS, _THETA = 0, 1, 2


@lru_cache(maxsize=8)
def _triu(n: int):
    iu = np.triu_indices(n, k=1)
    iu[0].flags.writeable = False
    iu[1].flags.writeable = False
    return iu


def _snapshot_from_pairs(present: np.ndarray, n: int) -> Snapshot:
    iu = _triu(n)
    adj = np.zeros((n, n), dtype=np.uint8)
    adj[iu] = present
    adj[(iu[1], iu[0])] = present
    return Snapshot(adj)


def bernoulli_pairs(pvec: np.ndarray, n: int, seed) -> Snapshot:
    """Independent Bernoulli edges with per-pair probabilities pvec
    (ordered like triu_indices(n, 1))."""
    npairs = n * (n - 1) // 2
    if pvec.shape != (npairs,):
        raise ValueError(f"expected {npairs} pair probabilities, got {pvec.shape}")
    if pvec.min() < 0 or pvec.max() > 1:
        raise ValueError("pair probabilities must be in [0,1]")
    u = make_rng(seed).random(npairs)
    return _snapshot_from_pairs(u < pvec, n)


def validate_block_matrix(B) -> np.ndarray:
    B = np.asarray(B, dtype=np.float64)
    if B.ndim != 2 or B.shape[0] != B.shape[1]:
        raise ValueError("block matrix must be square")
    if not np.isfinite(B).all() or B.min() < 0 or B.max() > 1:
        raise ValueError("block probabilities must lie in [0,1]")
    if np.abs(B - B.T).max() > 1e-12:
        raise ValueError("block matrix must be symmetric")
    return B


def _validate_labels(c, k: int) -> np.ndarray:
    c = np.asarray(c, dtype=np.int64)
    if c.ndim != 1:
        raise ValueError("labels must be a vector")
    if c.size and (c.min() < 0 or c.max() >= k):
        raise ValueError(f"label out of range for K={k}")
    return c


@dataclass(frozen=True)
class MarkovLabelChain:
    """Per-node label dynamics: initial distribution alpha, transitions pi."""

    pi: np.ndarray
    alpha: np.ndarray

    def __post_init__(self):
        pi = np.asarray(self.pi, dtype=np.float64)
        alpha = np.asarray(self.alpha, dtype=np.float64)
        if pi.ndim != 2 or pi.shape[0] != pi.shape[1]:
            raise ValueError("pi must be square")
        k = pi.shape[0]
        if alpha.shape != (k,):
            raise ValueError("alpha length must match pi")
        if pi.min() < 0 or alpha.min() < 0:
            raise ValueError("probabilities must be nonnegative")
        if np.abs(pi.sum(axis=1) - 1.0).max() > 1e-12:
            raise ValueError("rows of pi must sum to 1")
        if abs(alpha.sum() - 1.0) > 1e-12:
            raise ValueError("alpha must sum to 1")
        pi.flags.writeable = False
        alpha.flags.writeable = False
        object.__setattr__(self, "pi", pi)
        object.__setattr__(self, "alpha", alpha)

    @property
    def k(self) -> int:
        return self.pi.shape[0]


def sample_er(n: int, p: float, seed=None) -> Snapshot:
    """Erdos-Renyi G(n, p)."""
    if n < 2:
        raise ValueError("n must be >= 2")
    if not 0 <= p <= 1:
        raise ValueError("p must be in [0,1]")
    npairs = n * (n - 1) // 2
    u = make_rng(seed).random(npairs)
    return _snapshot_from_pairs(u < p, n)


def _pair_block_probs(c: np.ndarray, B: np.ndarray, n: int) -> np.ndarray:
    iu = _triu(n)
    return B[c[iu[0]], c[iu[1]]]


def sample_sbm(c, B, seed=None) -> Snapshot:
    """Stochastic block model: pair (i,j) present w.p. B[c_i, c_j]."""
    B = validate_block_matrix(B)
    c = _validate_labels(c, B.shape[0])
    n = c.shape[0]
    if n < 2:
        raise ValueError("n must be >= 2")
    bvec = _pair_block_probs(c, B, n)
    u = make_rng(seed).random(bvec.shape[0])
    return _snapshot_from_pairs(u < bvec, n)


def sample_correlated_sbm(c, B, rho: float, T: int, seed=None) -> TemporalNetwork:
    """SBM snapshots coupled by per-pair two-state Markov chains.

    Snapshot 0 is an SBM draw; afterwards a present pair survives with
    probability B + rho(1-B) and an absent one appears with probability
    B(1-rho).  Marginals stay SBM(B) and the lag-1 edge correlation is rho.
    """
    if not 0 <= rho <= 1:
        raise ValueError("rho must be in [0,1]")
    if T < 1:
        raise ValueError("T must be >= 1")
    B = validate_block_matrix(B)
    c = _validate_labels(c, B.shape[0])
    n = c.shape[0]
    if n < 2:
        raise ValueError("n must be >= 2")
    bvec = _pair_block_probs(c, B, n)
    npairs = bvec.shape[0]
    state = make_rng(seed, _EDGES, 0).random(npairs) < bvec
    snaps = [_snapshot_from_pairs(state, n)]
    for t in range(1, T):
        u = make_rng(seed, _EDGES, t).random(npairs)
        state = kernels.corr_step(state, bvec, rho, u)
        snaps.append(_snapshot_from_pairs(state, n))
    return TemporalNetwork(tuple(snaps))


def sample_label_chain(chain: MarkovLabelChain, n: int, T: int, seed=None) -> np.ndarray:
    """(T, n) label paths, one independent Markov chain per node."""
    if T < 1 or n < 1:
        raise ValueError("need T >= 1 and n >= 1")
    k = chain.k
    cum_alpha = np.cumsum(chain.alpha)
    cum_pi = np.cumsum(chain.pi, axis=1)
    labels = np.empty((T, n), dtype=np.int64)
    u = make_rng(seed, _LABELS, 0).random(n)
    labels[0] = np.minimum((u[:, None] >= cum_alpha).sum(axis=1), k - 1)
    for t in range(1, T):
        u = make_rng(seed, _LABELS, t).random(n)
        rows = cum_pi[labels[t - 1]]
        labels[t] = np.minimum((u[:, None] >= rows).sum(axis=1), k - 1)
    return labels


def sample_dynamic_sbm(chain: MarkovLabelChain, B, n: int, T: int, seed=None):
    """SBM with labels moving per node-level Markov chains.

    Returns (TemporalNetwork, labels) with labels of shape (T, n);
    conditional on the labels, snapshots are independent.
    """
    B = validate_block_matrix(B)
    if B.shape[0] != chain.k:
        raise ValueError("block matrix size must match chain")
    if n < 2:
        raise ValueError("n must be >= 2")
    labels = sample_label_chain(chain, n, T, seed)
    snaps = []
    for t in range(T):
        bvec = _pair_block_probs(labels[t], B, n)
        u = make_rng(seed, _EDGES, t).random(bvec.shape[0])
        snaps.append(_snapshot_from_pairs(u < bvec, n))
    return TemporalNetwork(tuple(snaps)), labels


def sample_degree_weights(n: int, epsilon: float, seed=None) -> np.ndarray:
    """theta_i ~ Uniform(1 - eps/2, 1 + eps/2)."""
    if not 0 <= epsilon < 2:
        raise ValueError("epsilon must be in [0, 2)")
    return make_rng(seed).uniform(1 - epsilon / 2, 1 + epsilon / 2, size=n)


def sample_dynamic_dcbm(chain: MarkovLabelChain, B, epsilon: float, n: int, T: int, seed=None):
    """Degree-corrected dynamic SBM: P_ij = theta_i theta_j B[c_i, c_j].

    Labels follow the node-level chains and theta is redrawn independently
    every snapshot.  Returns (TemporalNetwork, labels, thetas) with thetas
    of shape (T, n).  Any pair probability above 1 is an error, never
    silently clipped.
    """
    B = validate_block_matrix(B)
    if B.shape[0] != chain.k:
        raise ValueError("block matrix size must match chain")
    if not 0 <= epsilon < 2:
        raise ValueError("epsilon must be in [0, 2)")
    if n < 2:
        raise ValueError("n must be >= 2")
    labels = sample_label_chain(chain, n, T, seed)
    iu = _triu(n)
    thetas = np.empty((T, n), dtype=np.float64)
    snaps = []
    for t in range(T):
        theta = make_rng(seed, _THETA, t).uniform(1 - epsilon / 2, 1 + epsilon / 2, size=n)
        thetas[t] = theta
        bvec = _pair_block_probs(labels[t], B, n)
        pvec = theta[iu[0]] * theta[iu[1]] * bvec
        if pvec.max(initial=0.0) > 1:
            raise ValueError(f"snapshot {t}: theta_i*theta_j*B exceeds 1; lower epsilon or B")
        u = make_rng(seed, _EDGES, t).random(pvec.shape[0])
        snaps.append(_snapshot_from_pairs(u < pvec, n))
    return TemporalNetwork(tuple(snaps)), labels, thetas


def sample_chung_lu(theta, scale: float, seed=None) -> Snapshot:
    """Chung-Lu graph: pair (i,j) present w.p. scale * theta_i * theta_j."""
    theta = np.asarray(theta, dtype=np.float64)
    if theta.ndim != 1 or theta.shape[0] < 2:
        raise ValueError("theta must be a vector of length >= 2")
    if not np.isfinite(theta).all() or theta.min() <= 0:
        raise ValueError("theta entries must be positive and finite")
    if scale < 0:
        raise ValueError("scale must be nonnegative")
    top2 = np.partition(theta, -2)[-2:]
    if scale * top2[0] * top2[1] > 1:
        raise ValueError("scale*theta_i*theta_j exceeds 1 for some pair")
    n = theta.shape[0]
    iu = _triu(n)
    pvec = scale * theta[iu[0]] * theta[iu[1]]
    u = make_rng(seed).random(pvec.shape[0])
    return _snapshot_from_pairs(u < pvec, n)


def chung_lu_scale_for_density(theta, density: float) -> float:
    """Scale making the expected edge density of sample_chung_lu equal
    `density`."""
    theta = np.asarray(theta, dtype=np.float64)
    n = theta.shape[0]
    iu = _triu(n)
    s = float((theta[iu[0]] * theta[iu[1]]).sum())
    return density * (n * (n - 1) / 2) / s


def planted_block_matrix(b: float, delta: float, k: int = 2) -> np.ndarray:
    """K-block matrix with b + delta/2 on the diagonal, b - delta/2 off it."""
    if k < 1:
        raise ValueError("k must be >= 1")
    hi, lo = b + delta / 2, b - delta / 2
    if lo < 0 or hi > 1:
        raise ValueError("b +- delta/2 must stay within [0,1]")
    B = np.full((k, k), lo, dtype=np.float64)
    np.fill_diagonal(B, hi)
    return B


def split_labels(n: int, frac: float = 0.8) -> np.ndarray:
    """Deterministic 2-group labels: the first ceil(frac*n) nodes are
    group 0."""
    if not 0 < frac < 1:
        raise ValueError("frac must be in (0,1)")
    n0 = int(np.ceil(frac * n))
    c = np.ones(n, dtype=np.int64)
    c[:n0] = 0
    return c
