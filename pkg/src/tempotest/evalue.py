"""P-to-e calibration, e-value combination, and the temporal test driver.

An e-value is a nonnegative statistic with expectation at most 1 under the
null; evidence accumulates multiplicatively rather than on the p-scale.
Per-snapshot p-values are calibrated to e-values and combined by the
arithmetic mean, which stays a valid e-value under arbitrary dependence
between snapshots.  Rejection at combined > 20 corresponds roughly to
alpha = 0.05 via Markov's inequality.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .graph_core import TemporalNetwork
from .seeding import seed_sequence

_E_INV = math.exp(-1.0)

# switch to the series for g_avg when -log(p) drops below this; both sides
# agree to ~4e-8 at the boundary and the direct formula loses digits below
_AVG_SERIES_CUT = 1e-8


@dataclass(frozen=True)
class Calibrator:
    """A p-to-e transform: kappa (g = kappa*p^(kappa-1)), avg, or max.

    `max` tracks the running-maximum transform the kappa family is bounded
    by; it is NOT a proper calibrator (its integral over [0,1] exceeds 1)
    and is provided for comparison only.
    """

    kind: str
    kappa: float | None = None

    def __post_init__(self):
        if self.kind not in ("kappa", "max", "avg"):
            raise ValueError(f"unknown calibrator kind {self.kind!r}")
        if self.kind == "kappa":
            if self.kappa is None or not 0 < self.kappa < 1:
                raise ValueError("kappa must lie in (0,1)")
        elif self.kappa is not None:
            raise ValueError(f"{self.kind} takes no kappa parameter")

    @property
    def name(self) -> str:
        if self.kind == "kappa":
            return f"kappa:{self.kappa:g}"
        return self.kind

    @property
    def is_proper(self) -> bool:
        return self.kind != "max"

    @classmethod
    def parse(cls, spec: str) -> "Calibrator":
        """Parse `max`, `avg`, or `kappa:X` (e.g. kappa:0.25)."""
        spec = spec.strip().lower()
        if spec in ("max", "avg"):
            return cls(spec)
        if spec.startswith("kappa:"):
            try:
                k = float(spec.split(":", 1)[1])
            except ValueError:
                raise ValueError(f"bad calibrator spec {spec!r}") from None
            return cls("kappa", k)
        raise ValueError(f"bad calibrator spec {spec!r}: expected max, avg, or kappa:X")

    def __call__(self, p):
        return calibrate(p, self)


DEFAULT_CALIBRATORS = (
    Calibrator("max"),
    Calibrator("avg"),
    Calibrator("kappa", 0.25),
    Calibrator("kappa", 0.5),
    Calibrator("kappa", 0.75),
)


def _calibrate_kappa(p: np.ndarray, kappa: float) -> np.ndarray:
    with np.errstate(divide="ignore"):
        return kappa * np.power(p, kappa - 1.0)


def _calibrate_max(p: np.ndarray) -> np.ndarray:
    out = np.ones_like(p)
    lower = p <= _E_INV
    sub = p[lower]
    with np.errstate(divide="ignore", invalid="ignore"):
        vals = -_E_INV / (sub * np.log(sub))
    vals[sub == 0] = np.inf
    out[lower] = vals
    return out


def _calibrate_avg(p: np.ndarray) -> np.ndarray:
    out = np.empty_like(p)
    zero = p == 0
    out[zero] = np.inf
    rest = ~zero
    sub = p[rest]
    with np.errstate(divide="ignore", invalid="ignore"):
        u = -np.log(sub)
        direct = (1.0 - sub + sub * np.log(sub)) / (sub * np.log(sub) ** 2)
    # near p=1 the direct form is 0/0; series in u = -log p
    series = 0.5 + u / 6.0 + u * u / 24.0
    out[rest] = np.where(u < _AVG_SERIES_CUT, series, direct)
    return out


def calibrate(p, cal: Calibrator):
    """Apply a calibrator to a p-value or array of p-values.

    p=0 maps to +inf for every kind; g_avg(1) = 0.5 by continuity.
    """
    arr = np.asarray(p, dtype=np.float64)
    if np.isnan(arr).any() or (arr < 0).any() or (arr > 1).any():
        raise ValueError("p-values must lie in [0,1]")
    scalar = arr.ndim == 0
    arr = np.atleast_1d(arr)
    if cal.kind == "kappa":
        out = _calibrate_kappa(arr, cal.kappa)
    elif cal.kind == "max":
        out = _calibrate_max(arr)
    else:
        out = _calibrate_avg(arr)
    return float(out[0]) if scalar else out


def _check_evalues(es) -> np.ndarray:
    arr = np.atleast_1d(np.asarray(es, dtype=np.float64))
    if arr.size == 0:
        raise ValueError("need at least one e-value")
    if np.isnan(arr).any() or (arr < 0).any():
        raise ValueError("e-values must be nonnegative (nan not allowed)")
    return arr


def combine_mean(es) -> float:
    """Arithmetic mean; a valid e-value under arbitrary dependence."""
    return float(_check_evalues(es).mean())


def combine_product(es) -> float:
    """Product; a valid e-value only for independent snapshots."""
    return float(_check_evalues(es).prod())


_COMBINERS = {"mean": combine_mean, "product": combine_product}


def evalue_to_pvalue(e: float) -> float:
    """Markov bound: 1/E is a p-value."""
    if math.isnan(e) or e < 0:
        raise ValueError("e-value must be nonnegative")
    if e == 0:
        return 1.0
    if math.isinf(e):
        return 0.0
    return min(1.0, 1.0 / e)


class SnapshotTestError(RuntimeError):
    """A static test failed on one snapshot; carries the snapshot index."""

    def __init__(self, index: int, original: Exception):
        super().__init__(f"static test failed on snapshot {index}: {original}")
        self.index = index
        self.original = original


def _jsonify(x):
    if isinstance(x, dict):
        return {k: _jsonify(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonify(v) for v in x]
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        if math.isnan(x):
            return None
        return x
    return x


def _unjsonify(x):
    if isinstance(x, dict):
        return {k: _unjsonify(v) for k, v in x.items()}
    if isinstance(x, list):
        return [_unjsonify(v) for v in x]
    if x == "inf":
        return math.inf
    if x == "-inf":
        return -math.inf
    return x


@dataclass(frozen=True)
class TestReport:
    """Full outcome of a temporal community-structure test."""

    __test__ = False  # not a pytest class, despite the name

    pvalues: tuple
    evalues: tuple
    combined: float
    loo: tuple
    calibrator: str
    threshold: float
    reject: bool
    static_test: str
    combine: str = "mean"
    diagnostics: tuple = ()
    meta: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return _jsonify(
            {
                "pvalues": list(self.pvalues),
                "evalues": list(self.evalues),
                "combined": self.combined,
                "loo": list(self.loo),
                "calibrator": self.calibrator,
                "threshold": self.threshold,
                "reject": self.reject,
                "static_test": self.static_test,
                "combine": self.combine,
                "diagnostics": list(self.diagnostics),
                "meta": self.meta,
            }
        )

    def to_json(self, indent=2) -> str:
        return json.dumps(self.to_dict(), indent=indent, allow_nan=False)

    @classmethod
    def from_dict(cls, d: dict) -> "TestReport":
        d = _unjsonify(d)

        def num(v):
            # JSON null in a numeric slot is a serialized NaN
            return math.nan if v is None else float(v)

        return cls(
            pvalues=tuple(num(v) for v in d["pvalues"]),
            evalues=tuple(num(v) for v in d["evalues"]),
            combined=num(d["combined"]),
            loo=tuple(num(v) for v in d["loo"]),
            calibrator=d["calibrator"],
            threshold=d["threshold"],
            reject=d["reject"],
            static_test=d["static_test"],
            combine=d.get("combine", "mean"),
            diagnostics=tuple(d.get("diagnostics", ())),
            meta=d.get("meta", {}),
        )

    @classmethod
    def from_json(cls, text: str) -> "TestReport":
        return cls.from_dict(json.loads(text))


def snapshot_pvalues(net: TemporalNetwork, static_test="tw", seed=None, **test_kwargs):
    """Run the chosen static test on every snapshot.

    static_test is "tw", "e2d2", or a callable(snapshot, seed=..., **kw)
    returning a float p-value or a result object with .pvalue.  Each
    snapshot gets its own derived seed stream.  Failures re-raise as
    SnapshotTestError with the snapshot index attached.
    """
    from .e2d2_test import e2d2_pvalue_bootstrap
    from .spectral import tw_pvalue_bootstrap

    if callable(static_test):
        fn = static_test
        test_name = getattr(static_test, "__name__", "custom")
    elif static_test == "tw":
        fn, test_name = tw_pvalue_bootstrap, "tw"
    elif static_test == "e2d2":
        fn, test_name = e2d2_pvalue_bootstrap, "e2d2"
    else:
        raise ValueError(f"unknown static test {static_test!r}")
    pvalues = []
    diags = []
    for t, snap in enumerate(net):
        try:
            res = fn(snap, seed=seed_sequence(seed, t) if seed is not None else None, **test_kwargs)
        except (ValueError, RuntimeError) as exc:
            raise SnapshotTestError(t, exc) from exc
        if hasattr(res, "pvalue"):
            pvalues.append(float(res.pvalue))
            diags.append(res.diagnostics() if hasattr(res, "diagnostics") else {})
        else:
            pvalues.append(float(res))
            diags.append({})
    return pvalues, diags, test_name


def run_temporal_test(
    net: TemporalNetwork,
    static_test="tw",
    cal: Calibrator | None = None,
    threshold: float = 20.0,
    seed=None,
    combine: str = "mean",
    **test_kwargs,
) -> TestReport:
    """Per-snapshot p-values -> e-values -> combined decision.

    The default combiner is the arithmetic mean (valid under arbitrary
    snapshot dependence); "product" assumes independent snapshots and must
    be requested explicitly.  Leave-one-out combined values are reported to
    help diagnose single-snapshot blowups.
    """
    if cal is None:
        cal = Calibrator("kappa", 0.25)
    if combine not in _COMBINERS:
        raise ValueError(f"unknown combine rule {combine!r}")
    combiner = _COMBINERS[combine]
    pvalues, diags, test_name = snapshot_pvalues(net, static_test, seed=seed, **test_kwargs)
    es = calibrate(np.array(pvalues), cal)
    combined = combiner(es)
    T = len(es)
    if T == 1:
        loo = (math.nan,)
    else:
        loo = tuple(combiner(np.delete(es, t)) for t in range(T))
    return TestReport(
        pvalues=tuple(float(p) for p in pvalues),
        evalues=tuple(float(e) for e in es),
        combined=float(combined),
        loo=loo,
        calibrator=cal.name,
        threshold=float(threshold),
        reject=bool(combined > threshold),
        static_test=test_name,
        combine=combine,
        diagnostics=tuple(diags),
    )
