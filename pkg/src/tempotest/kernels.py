"""Hot loops with two interchangeable backends.

Each kernel exists twice: a plain-loop version compiled with numba when it
is available, and a vectorized numpy version.  Both produce bit-identical
results (all randomness is drawn outside the kernels, integer scores decide
ties, and float expressions are written with the same operation order), so
the backend is a pure speed choice.

Set TEMPOTEST_DISABLE_NUMBA=1 to force the numpy backend; the module
attribute BACKEND reports which one is active.
"""

from __future__ import annotations

import os

import numpy as np

_INT_MIN = np.iinfo(np.int64).min

_disabled = os.environ.get("TEMPOTEST_DISABLE_NUMBA", "").strip().lower() in (
    "1",
    "true",
    "yes",
)

HAS_NUMBA = False
if not _disabled:
    try:
        from numba import njit

        HAS_NUMBA = True
    except ImportError:
        pass

BACKEND = "numba" if HAS_NUMBA else "numpy"


# ---------------------------------------------------------------------------
# greedy modularity agglomeration: merge selection
#
# At each step merge the pair of alive communities (i, j), W[i,j] > 0, with
# the largest integer score S = 2m*W[i,j] - d[i]*d[j] (the sign/order of
# modularity gains times the constant (2m)^2, so selection is exact integer
# arithmetic with no float ties).  First maximum in row-major (i<j) order
# wins.  Returns the merge sequence; fewer than n-1 merges means the graph
# was disconnected.
# ---------------------------------------------------------------------------


def _cnm_merges_numpy(W, d, m):
    # W and d are int64 working copies owned by this call (see wrapper)
    n = W.shape[0]
    two_m = np.int64(2 * m)
    S = two_m * W - np.outer(d, d)
    S[W == 0] = _INT_MIN
    S[np.tril_indices(n)] = _INT_MIN
    alive = np.ones(n, dtype=bool)
    merges = np.empty((n - 1, 2), dtype=np.int64)
    for step in range(n - 1):
        flat = np.argmax(S)
        bi, bj = divmod(flat, n)
        if S[bi, bj] == _INT_MIN:
            return merges[:step]
        merges[step, 0] = bi
        merges[step, 1] = bj
        # fold community bj into bi
        W[bi, :] += W[bj, :]
        W[:, bi] += W[:, bj]
        d[bi] += d[bj]
        alive[bj] = False
        W[bj, :] = 0
        W[:, bj] = 0
        S[bj, :] = _INT_MIN
        S[:, bj] = _INT_MIN
        row = two_m * W[bi, :] - d[bi] * d
        row[~alive] = _INT_MIN
        row[W[bi, :] == 0] = _INT_MIN
        row[bi] = _INT_MIN
        S[bi, bi + 1 :] = row[bi + 1 :]
        S[:bi, bi] = row[:bi]
    return merges


def _cnm_merges_loops(W, d, m):
    n = W.shape[0]
    two_m = np.int64(2 * m)
    alive = np.ones(n, dtype=np.bool_)
    merges = np.empty((n - 1, 2), dtype=np.int64)
    # cached per-row best mergeable partner (over all alive partners)
    best_s = np.full(n, _INT_MIN, dtype=np.int64)
    best_j = np.full(n, -1, dtype=np.int64)
    for i in range(n):
        for j in range(n):
            if j != i and W[i, j] > 0:
                s = two_m * W[i, j] - d[i] * d[j]
                if s > best_s[i]:
                    best_s[i] = s
                    best_j[i] = j
    for step in range(n - 1):
        bi = -1
        sbest = _INT_MIN
        for i in range(n):
            if alive[i] and best_j[i] >= 0 and best_s[i] > sbest:
                sbest = best_s[i]
                bi = i
        if bi < 0:
            return merges[:step]
        bj = best_j[bi]
        if bj < bi:
            bi, bj = bj, bi
        merges[step, 0] = bi
        merges[step, 1] = bj
        for k in range(n):
            if alive[k]:
                w = W[bi, k] + W[bj, k]
                W[bi, k] = w
                W[k, bi] = w
        d[bi] += d[bj]
        alive[bj] = False
        for k in range(n):
            W[bj, k] = 0
            W[k, bj] = 0
        # refresh caches invalidated by the merge
        best_s[bi] = _INT_MIN
        best_j[bi] = -1
        for j in range(n):
            if alive[j] and j != bi and W[bi, j] > 0:
                s = two_m * W[bi, j] - d[bi] * d[j]
                if s > best_s[bi]:
                    best_s[bi] = s
                    best_j[bi] = j
        for k in range(n):
            if not alive[k] or k == bi:
                continue
            if best_j[k] == bi or best_j[k] == bj:
                best_s[k] = _INT_MIN
                best_j[k] = -1
                for j in range(n):
                    if alive[j] and j != k and W[k, j] > 0:
                        s = two_m * W[k, j] - d[k] * d[j]
                        if s > best_s[k]:
                            best_s[k] = s
                            best_j[k] = j
            elif W[k, bi] > 0:
                s = two_m * W[k, bi] - d[k] * d[bi]
                if s > best_s[k]:
                    best_s[k] = s
                    best_j[k] = bi
    return merges


# ---------------------------------------------------------------------------
# greedy single-node sweeps for the e2d2 objective
#
# U = (m_in/D_in - m_out/D_out) / (K * p_hat) where D_in/D_out count intra/
# inter pairs.  Repeatedly sweep nodes in index order, moving a node to the
# best strictly-improving existing group; stop after a sweep with no moves.
# Moves that would leave fewer than 2 non-empty groups are forbidden.
# ---------------------------------------------------------------------------


def _greedy_sweeps_numpy(indptr, indices, labels, sizes, E, m_in, K_eff, m, total_pairs, p_hat, u_cur, max_sweeps):
    n = labels.shape[0]
    D_in = int(((sizes * (sizes - 1)) // 2).sum())
    m = int(m)
    total_pairs = int(total_pairs)
    m_in = int(m_in)
    K_eff = int(K_eff)
    sweeps = 0
    improved = True
    while improved and sweeps < max_sweeps:
        improved = False
        sweeps += 1
        for v in range(n):
            g = labels[v]
            szg = sizes[g]
            K_new = K_eff - 1 if szg == 1 else K_eff
            if K_new < 2:
                continue
            D_in_new = D_in - (szg - 1) + sizes
            D_out_new = total_pairs - D_in_new
            m_in_new = m_in - E[v, g] + E[v]
            with np.errstate(divide="ignore", invalid="ignore"):
                u = (m_in_new / D_in_new - (m - m_in_new) / D_out_new) / (K_new * p_hat)
            bad = (sizes == 0) | (D_in_new <= 0) | (D_out_new <= 0)
            bad[g] = True
            u[bad] = -np.inf
            h = int(np.argmax(u))
            if u[h] > u_cur:
                u_cur = float(u[h])
                sizes[g] -= 1
                sizes[h] += 1
                if sizes[g] == 0:
                    K_eff -= 1
                D_in = int(D_in_new[h])
                m_in = int(m_in_new[h])
                labels[v] = h
                nbrs = indices[indptr[v] : indptr[v + 1]]
                np.subtract.at(E, (nbrs, g), 1)
                np.add.at(E, (nbrs, h), 1)
                improved = True
    return sweeps, m_in, K_eff, u_cur


def _greedy_sweeps_loops(indptr, indices, labels, sizes, E, m_in, K_eff, m, total_pairs, p_hat, u_cur, max_sweeps):
    n = labels.shape[0]
    K0 = sizes.shape[0]
    D_in = np.int64(0)
    for k in range(K0):
        D_in += sizes[k] * (sizes[k] - 1) // 2
    sweeps = 0
    improved = True
    while improved and sweeps < max_sweeps:
        improved = False
        sweeps += 1
        for v in range(n):
            g = labels[v]
            szg = sizes[g]
            K_new = K_eff - 1 if szg == 1 else K_eff
            if K_new < 2:
                continue
            best_u = u_cur
            best_h = -1
            best_din = np.int64(0)
            best_min = np.int64(0)
            for h in range(K0):
                if h == g or sizes[h] == 0:
                    continue
                D_in_new = D_in - (szg - 1) + sizes[h]
                D_out_new = total_pairs - D_in_new
                if D_in_new <= 0 or D_out_new <= 0:
                    continue
                m_in_new = m_in - E[v, g] + E[v, h]
                u = (m_in_new / D_in_new - (m - m_in_new) / D_out_new) / (K_new * p_hat)
                if u > best_u:
                    best_u = u
                    best_h = h
                    best_din = D_in_new
                    best_min = m_in_new
            if best_h >= 0:
                h = best_h
                u_cur = best_u
                sizes[g] -= 1
                sizes[h] += 1
                if sizes[g] == 0:
                    K_eff -= 1
                D_in = best_din
                m_in = best_min
                labels[v] = h
                for ptr in range(indptr[v], indptr[v + 1]):
                    w = indices[ptr]
                    E[w, g] -= 1
                    E[w, h] += 1
                improved = True
    return sweeps, m_in, K_eff, u_cur


# ---------------------------------------------------------------------------
# correlated SBM pair chains: one time step for all pairs at once
#
# prev is the 0/1 pair state, bvec the per-pair base probability, u fresh
# uniforms.  Present pairs survive with prob b + rho*(1-b), absent pairs
# appear with prob b*(1-rho).
# ---------------------------------------------------------------------------


def _corr_step_numpy(prev, bvec, rho, u, out):
    p_stay = bvec + rho * (1.0 - bvec)
    p_appear = bvec * (1.0 - rho)
    thr = np.where(prev != 0, p_stay, p_appear)
    np.less(u, thr, out=out)
    return out


def _corr_step_loops(prev, bvec, rho, u, out):
    for k in range(prev.shape[0]):
        b = bvec[k]
        if prev[k] != 0:
            thr = b + rho * (1.0 - b)
        else:
            thr = b * (1.0 - rho)
        out[k] = u[k] < thr
    return out


if HAS_NUMBA:
    _cnm_merges_nb = njit(cache=True)(_cnm_merges_loops)
    _greedy_sweeps_nb = njit(cache=True)(_greedy_sweeps_loops)
    _corr_step_nb = njit(cache=True)(_corr_step_loops)


def _pick(nb_fn_name, py_fn, backend):
    if backend is None:
        backend = BACKEND
    if backend == "numba":
        if not HAS_NUMBA:
            raise RuntimeError("numba backend requested but numba is unavailable or disabled")
        return globals()[nb_fn_name]
    if backend == "numpy":
        return py_fn
    raise ValueError(f"unknown backend {backend!r}")


def cnm_merge_sequence(W, d, m, backend=None):
    """Merge sequence of greedy modularity agglomeration.

    W: dense int64 community-edge-weight matrix (initially the adjacency),
    d: int64 degree sums, m: edge count.  Returns an (n_merges, 2) array;
    n_merges < n-1 iff the graph is disconnected.
    """
    fn = _pick("_cnm_merges_nb", _cnm_merges_numpy, backend)
    W = np.ascontiguousarray(W, dtype=np.int64).copy()
    d = np.asarray(d, dtype=np.int64).copy()
    return fn(W, d, int(m))


def greedy_sweeps(indptr, indices, labels, sizes, E, m_in, K_eff, m, total_pairs, p_hat, u_cur, max_sweeps=10000, backend=None):
    """Run strict-improvement single-node sweeps in place.

    Returns (sweeps, m_in, K_eff, u).  labels/sizes/E are mutated.
    """
    fn = _pick("_greedy_sweeps_nb", _greedy_sweeps_numpy, backend)
    return fn(
        np.asarray(indptr, dtype=np.int64),
        np.asarray(indices, dtype=np.int64),
        labels,
        sizes,
        E,
        np.int64(m_in),
        np.int64(K_eff),
        np.int64(m),
        np.int64(total_pairs),
        float(p_hat),
        float(u_cur),
        np.int64(max_sweeps),
    )


def corr_step(prev, bvec, rho, u, backend=None):
    """Advance all pair chains one step; returns a bool array."""
    fn = _pick("_corr_step_nb", _corr_step_numpy, backend)
    out = np.empty(prev.shape[0], dtype=np.bool_)
    fn(prev, bvec, float(rho), u, out)
    return out
