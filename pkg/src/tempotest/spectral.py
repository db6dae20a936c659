"""Static spectral test for community structure.

The observed adjacency is standardized as (A - P_hat) / sqrt((n-1) p_hat
(1-p_hat)) with P_hat the constant-density fit, and its largest eigenvalue
is compared against the Tracy-Widom (beta=1) law.  Because the finite-n
convergence to Tracy-Widom is slow, the test recenters the statistic with
a parametric bootstrap: the same eigenvalue is computed on ER(n, p_hat)
replicates (reusing the observed P_hat and scaling) and

    gamma' = mu_tw + ((gamma - mean_boot) / sd_boot) * sd_tw

is referred to the tabulated TW1 survival function.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from importlib import resources

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla
from scipy.interpolate import PchipInterpolator

from .graph_core import Snapshot, edge_density
from .seeding import make_rng
from .generators import sample_er

_DENSE_CUTOFF = 150


class DegenerateGraphError(ValueError):
    """Graph is empty or complete: the standardized matrix is undefined."""


@dataclass(frozen=True)
class TW1Reference:
    """Tabulated CDF of the Tracy-Widom beta=1 distribution."""

    x: np.ndarray
    cdf: np.ndarray
    mean: float
    sd: float

    def __post_init__(self):
        x = np.asarray(self.x, dtype=np.float64)
        cdf = np.asarray(self.cdf, dtype=np.float64)
        if x.ndim != 1 or x.shape != cdf.shape or x.shape[0] < 4:
            raise ValueError("reference grid must be two equal-length vectors")
        if not (np.diff(x) > 0).all():
            raise ValueError("grid x values must be strictly increasing")
        if cdf.min() < 0 or cdf.max() > 1 or (np.diff(cdf) < 0).any():
            raise ValueError("grid F values must be a CDF")
        if x[0] > -10 or x[-1] < 8:
            raise ValueError("grid must span at least [-10, 8]")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "cdf", cdf)
        object.__setattr__(self, "_interp", PchipInterpolator(x, cdf, extrapolate=False))


_REF_CACHE: dict = {}


def load_tw1_reference(path=None) -> TW1Reference:
    """Load the packaged TW1 table, or one in the same format from `path`.

    Format: `x<TAB>F` rows; `#` comment lines, one of which carries
    `mean=... sd=...`.
    """
    key = str(path) if path is not None else None
    if key in _REF_CACHE:
        return _REF_CACHE[key]
    if path is None:
        text = resources.files("tempotest").joinpath("data/tw1_cdf.tsv").read_text()
    else:
        with open(path) as fh:
            text = fh.read()
    mean = sd = None
    xs, fs = [], []
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            m = re.search(r"mean=(\S+)\s+sd=(\S+)", line)
            if m:
                mean, sd = float(m.group(1)), float(m.group(2))
            continue
        a, b = line.split("\t")
        xs.append(float(a))
        fs.append(float(b))
    if mean is None or sd is None:
        raise ValueError("reference table lacks a `# mean=... sd=...` header")
    ref = TW1Reference(np.array(xs), np.array(fs), mean, sd)
    _REF_CACHE[key] = ref
    return ref


def tw1_survival(x, ref: TW1Reference | None = None):
    """P(TW1 > x) by monotone cubic interpolation of the table.

    Outside the grid the nearest tail value is used, so the survival
    function is never exactly 0.
    """
    if ref is None:
        ref = load_tw1_reference()
    x = np.asarray(x, dtype=np.float64)
    F = ref._interp(x)
    F = np.where(np.asarray(x) < ref.x[0], ref.cdf[0], F)
    F = np.where(np.asarray(x) > ref.x[-1], ref.cdf[-1], F)
    out = np.clip(1.0 - F, 0.0, 1.0)
    return float(out) if out.ndim == 0 else out


def _lam1_shifted(adj, phat: float, c: float, mode: str) -> float:
    """Largest eigenvalue of (A - P_hat)/c without forming the dense matrix.

    (A - P_hat)v = Av - phat*sum(v)*1 + phat*v, a rank-1 plus diagonal
    correction of A, so ARPACK works from the sparse adjacency.  Small
    matrices and ARPACK failures fall back to a dense solve.
    """
    n = adj.shape[0]
    if n < _DENSE_CUTOFF:
        return _lam1_dense(adj, phat, c, mode)
    A = sp.csr_matrix(adj).astype(np.float64)
    ones = np.ones(n)

    def mv(v):
        return (A @ v - phat * v.sum() * ones + phat * v) / c

    L = spla.LinearOperator((n, n), matvec=mv, dtype=np.float64)
    try:
        if mode == "algebraic":
            vals = spla.eigsh(L, k=1, which="LA", v0=ones, tol=1e-9, return_eigenvectors=False)
            return float(vals[0])
        hi = spla.eigsh(L, k=1, which="LA", v0=ones, tol=1e-9, return_eigenvectors=False)[0]
        lo = spla.eigsh(L, k=1, which="SA", v0=ones, tol=1e-9, return_eigenvectors=False)[0]
        return float(max(abs(hi), abs(lo)))
    except spla.ArpackNoConvergence:
        return _lam1_dense(adj, phat, c, mode)


def _lam1_dense(adj, phat: float, c: float, mode: str) -> float:
    M = adj.astype(np.float64)
    M -= phat
    np.fill_diagonal(M, 0.0)
    M /= c
    vals = np.linalg.eigvalsh(M)
    if mode == "algebraic":
        return float(vals[-1])
    return float(max(abs(vals[-1]), abs(vals[0])))


def standardized_top_eigenvalue(s: Snapshot, mode: str = "algebraic") -> float:
    """gamma = lambda_1((A - P_hat) / sqrt((n-1) p_hat (1-p_hat))).

    mode "algebraic" (default) takes the largest eigenvalue; "magnitude"
    takes the largest absolute value, so strong bipartite-like deviations
    also register as large statistics rather than vanishing into the lower
    tail.  The bootstrap correction applies the same mode to its replicates,
    which keeps the null calibrated either way.
    """
    if mode not in ("algebraic", "magnitude"):
        raise ValueError(f"unknown mode {mode!r}")
    phat = edge_density(s)
    if phat <= 0 or phat >= 1:
        raise DegenerateGraphError(f"edge density {phat} is degenerate (empty or complete graph)")
    c = np.sqrt((s.n - 1) * phat * (1 - phat))
    return _lam1_shifted(s.adj, phat, c, mode)


def tw_correct(gamma: float, boot_mean: float, boot_sd: float, ref: TW1Reference) -> float:
    """Bootstrap recentering: gamma' = mu_tw + ((gamma-mean)/sd)*sd_tw."""
    if not np.isfinite(boot_sd) or boot_sd <= 0:
        raise ValueError("bootstrap standard deviation is zero; correction undefined")
    return ref.mean + ((gamma - boot_mean) / boot_sd) * ref.sd


@dataclass(frozen=True)
class TwTestResult:
    """Outcome of the bootstrap-corrected spectral test on one snapshot."""

    pvalue: float
    gamma: float
    gamma_prime: float
    boot_mean: float
    boot_sd: float
    p_hat: float
    n_boot: int
    degenerate: bool = False

    def diagnostics(self) -> dict:
        return {
            "gamma": self.gamma,
            "gamma_prime": self.gamma_prime,
            "boot_mean": self.boot_mean,
            "boot_sd": self.boot_sd,
            "p_hat": self.p_hat,
            "n_boot": self.n_boot,
            "degenerate": self.degenerate,
        }


def tw_pvalue_bootstrap(
    s: Snapshot,
    n_boot: int = 50,
    seed=None,
    ref: TW1Reference | None = None,
    mode: str = "algebraic",
) -> TwTestResult:
    """Bootstrap-corrected Tracy-Widom p-value for one snapshot.

    Draws n_boot ER(n, p_hat) replicates, standardizes each with the SAME
    P_hat and scaling as the observed graph, recenters gamma by the
    replicate mean/sd, and evaluates the TW1 survival function.  Degenerate
    graphs (empty/complete) are no evidence against the null: p = 1 with
    the `degenerate` flag set.
    """
    if s.n < 10:
        raise ValueError("tw test needs n >= 10")
    if n_boot < 2:
        raise ValueError("n_boot must be >= 2")
    if ref is None:
        ref = load_tw1_reference()
    phat = edge_density(s)
    if phat <= 0 or phat >= 1:
        return TwTestResult(
            pvalue=1.0,
            gamma=np.nan,
            gamma_prime=np.nan,
            boot_mean=np.nan,
            boot_sd=np.nan,
            p_hat=phat,
            n_boot=0,
            degenerate=True,
        )
    n = s.n
    c = np.sqrt((n - 1) * phat * (1 - phat))
    gamma = _lam1_shifted(s.adj, phat, c, mode)
    boot = np.empty(n_boot)
    for b in range(n_boot):
        rep = sample_er(n, phat, make_rng(seed, b))
        boot[b] = _lam1_shifted(rep.adj, phat, c, mode)
    boot_mean = float(boot.mean())
    boot_sd = float(boot.std(ddof=1))
    gamma_prime = tw_correct(gamma, boot_mean, boot_sd, ref)
    pvalue = float(tw1_survival(gamma_prime, ref))
    return TwTestResult(
        pvalue=pvalue,
        gamma=float(gamma),
        gamma_prime=float(gamma_prime),
        boot_mean=boot_mean,
        boot_sd=boot_sd,
        p_hat=phat,
        n_boot=n_boot,
    )
