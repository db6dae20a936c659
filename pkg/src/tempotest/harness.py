"""Experiment presets, Monte Carlo sweeps, and the real-data pipeline.

A sweep varies either the community-strength parameter delta or the node
count n, runs mc_reps replicates per grid point, applies every configured
calibrator to the same per-snapshot p-values, and reports the median
combined e-value per (setting, calibrator).  Everything is keyed by
(master seed, grid index, replicate index), so results are reproducible
and independent of execution order.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, fields, replace

import numpy as np

from .evalue import (
    Calibrator,
    TestReport,
    calibrate,
    combine_mean,
    run_temporal_test,
    snapshot_pvalues,
)
from .generators import (
    MarkovLabelChain,
    planted_block_matrix,
    sample_correlated_sbm,
    sample_dynamic_dcbm,
    sample_dynamic_sbm,
    split_labels,
)
from .graph_core import bin_events, read_event_file
from .seeding import seed_sequence

MODELS = ("corr-sbm", "dyn-sbm", "dyn-dcbm")


@dataclass(frozen=True)
class ExperimentConfig:
    """Settings for one Monte Carlo sweep (flat key=value serializable)."""

    model: str
    sweep: str
    sweep_values: tuple
    name: str = ""
    n: int = 0
    delta: float = 0.0
    T: int = 10
    k: int = 2
    b: float = 0.01
    rho: float = 0.25
    pi_stay: float = 0.9
    alpha1: float = 0.8
    epsilon: float = 0.6
    group1_frac: float = 0.8
    mc_reps: int = 100
    calibrators: tuple = ("max", "avg", "kappa:0.25", "kappa:0.5", "kappa:0.75")
    static_test: str = "tw"
    n_boot: int = 50
    seed: int = 0

    def __post_init__(self):
        if self.model not in MODELS:
            raise ValueError(f"model must be one of {MODELS}")
        if self.sweep not in ("delta", "n"):
            raise ValueError("sweep must be 'delta' or 'n'")
        if len(self.sweep_values) == 0:
            raise ValueError("sweep_values must be non-empty")
        if self.sweep == "delta" and self.n < 2:
            raise ValueError("a delta sweep needs a fixed n >= 2")
        if self.mc_reps < 1:
            raise ValueError("mc_reps must be >= 1")
        for spec in self.calibrators:
            Calibrator.parse(spec)
        object.__setattr__(self, "sweep_values", tuple(float(v) for v in self.sweep_values))
        object.__setattr__(self, "calibrators", tuple(self.calibrators))

    @classmethod
    def from_mapping(cls, d: dict) -> "ExperimentConfig":
        d = dict(d)
        kwargs = {}
        conv = {f.name: f.type for f in fields(cls)}
        for key, raw in d.items():
            if key not in conv:
                raise ValueError(f"unknown config key {key!r}")
            if key in ("sweep_values",):
                kwargs[key] = tuple(float(v) for v in str(raw).split(","))
            elif key in ("calibrators",):
                kwargs[key] = tuple(v.strip() for v in str(raw).split(","))
            elif key in ("n", "T", "k", "mc_reps", "n_boot", "seed"):
                kwargs[key] = int(raw)
            elif key in ("delta", "b", "rho", "pi_stay", "alpha1", "epsilon", "group1_frac"):
                kwargs[key] = float(raw)
            else:
                kwargs[key] = str(raw)
        return cls(**kwargs)

    def to_text(self) -> str:
        lines = []
        for f in fields(self):
            v = getattr(self, f.name)
            if f.name == "sweep_values":
                v = ",".join(repr(float(x)) for x in v)
            elif f.name == "calibrators":
                v = ",".join(v)
            lines.append(f"{f.name}={v}")
        return "\n".join(lines) + "\n"


def parse_config_text(text: str) -> dict:
    """Flat key=value lines; blank lines and # comments ignored."""
    out = {}
    for ln, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError(f"line {ln}: expected key=value, got {line!r}")
        key, val = line.split("=", 1)
        out[key.strip()] = val.strip()
    return out


def read_config_file(path) -> ExperimentConfig:
    with open(path) as fh:
        return ExperimentConfig.from_mapping(parse_config_text(fh.read()))


def list_presets() -> list:
    from importlib import resources

    names = set()
    for item in resources.files("tempotest").joinpath("presets").iterdir():
        base = item.name
        if base.endswith(".conf"):
            names.add(base.rsplit(".", 2)[0])
    return sorted(names)


def load_preset(name: str, scale: str = "desk") -> ExperimentConfig:
    """Load a bundled preset at `desk` (fast) or `full` (as published) scale."""
    from importlib import resources

    if scale not in ("desk", "full"):
        raise ValueError("scale must be 'desk' or 'full'")
    path = resources.files("tempotest").joinpath(f"presets/{name}.{scale}.conf")
    try:
        text = path.read_text()
    except FileNotFoundError:
        raise ValueError(f"unknown preset {name!r} (have: {', '.join(list_presets())})") from None
    return ExperimentConfig.from_mapping(parse_config_text(text))


def _label_chain(cfg: ExperimentConfig) -> MarkovLabelChain:
    k = cfg.k
    off = (1.0 - cfg.pi_stay) / (k - 1) if k > 1 else 0.0
    pi = np.full((k, k), off)
    np.fill_diagonal(pi, cfg.pi_stay)
    if k > 1:
        rest = (1.0 - cfg.alpha1) / (k - 1)
        alpha = np.full(k, rest)
        alpha[0] = cfg.alpha1
    else:
        alpha = np.ones(1)
    return MarkovLabelChain(pi, alpha)


def _generate(cfg: ExperimentConfig, n: int, B: np.ndarray, seed):
    if cfg.model == "corr-sbm":
        labels = split_labels(n, cfg.group1_frac)
        return sample_correlated_sbm(labels, B, cfg.rho, cfg.T, seed)
    chain = _label_chain(cfg)
    if cfg.model == "dyn-sbm":
        net, _ = sample_dynamic_sbm(chain, B, n, cfg.T, seed)
        return net
    net, _, _ = sample_dynamic_dcbm(chain, B, cfg.epsilon, n, cfg.T, seed)
    return net


@dataclass(frozen=True)
class SweepResult:
    """Per-(setting, calibrator, replicate) combined e-values and medians.

    evalues has shape (n_settings, n_calibrators, mc_reps) with NaN marking
    failed replicates; medians ignore those.
    """

    config: ExperimentConfig
    settings: tuple
    calibrators: tuple
    evalues: np.ndarray
    medians: np.ndarray
    n_failed: np.ndarray
    failures: tuple = ()

    def median_is_infinite(self) -> np.ndarray:
        return np.isinf(self.medians)


def _setting_label(cfg: ExperimentConfig, value: float):
    return int(value) if cfg.sweep == "n" else float(value)


def run_sweep(cfg: ExperimentConfig, progress=None) -> SweepResult:
    """Run the full Monte Carlo sweep described by cfg.

    Replicate (gi, r) derives generation and testing streams from
    (cfg.seed, gi, r, 0) and (cfg.seed, gi, r, 1).  A replicate whose
    generation or test raises is recorded and excluded; more than 10%
    failures at any grid point aborts the sweep.
    """
    cals = tuple(Calibrator.parse(spec) for spec in cfg.calibrators)
    S, C, R = len(cfg.sweep_values), len(cals), cfg.mc_reps
    evs = np.full((S, C, R), np.nan)
    n_failed = np.zeros(S, dtype=np.int64)
    failures = []
    for gi, val in enumerate(cfg.sweep_values):
        if cfg.sweep == "delta":
            n, delta = cfg.n, float(val)
        else:
            n, delta = int(val), cfg.delta
        B = planted_block_matrix(cfg.b, delta, cfg.k)
        for r in range(R):
            try:
                net = _generate(cfg, n, B, seed_sequence(cfg.seed, gi, r, 0))
                pvals, _, _ = snapshot_pvalues(
                    net, cfg.static_test, seed=seed_sequence(cfg.seed, gi, r, 1), n_boot=cfg.n_boot
                )
                parr = np.array(pvals)
                for ci, cal in enumerate(cals):
                    evs[gi, ci, r] = combine_mean(calibrate(parr, cal))
            except (ValueError, RuntimeError) as exc:
                # SnapshotTestError is a RuntimeError; record and move on
                n_failed[gi] += 1
                failures.append((gi, r, f"{type(exc).__name__}: {exc}"))
            if progress is not None:
                progress(gi, r, S, R)
        if n_failed[gi] > 0.1 * R:
            raise RuntimeError(
                f"grid point {gi} (value {val}): {n_failed[gi]}/{R} replicates failed; "
                f"first failure: {failures[0][2] if failures else 'n/a'}"
            )
    with np.errstate(invalid="ignore"):
        medians = np.nanmedian(evs, axis=2)
    settings = tuple(_setting_label(cfg, v) for v in cfg.sweep_values)
    return SweepResult(
        config=cfg,
        settings=settings,
        calibrators=tuple(c.name for c in cals),
        evalues=evs,
        medians=medians,
        n_failed=n_failed,
        failures=tuple(failures),
    )


def _fmt(x: float) -> str:
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return repr(float(x))


def emit_csv(result: SweepResult, out_dir) -> tuple:
    """Write evalues.csv and medians.csv into out_dir.

    evalues.csv: setting,calibrator,replicate,evalue (failed replicates
    omitted).  medians.csv: setting,calibrator,median,is_infinite.
    Infinities are spelled "inf" so the files round-trip losslessly.
    """
    os.makedirs(out_dir, exist_ok=True)
    ev_path = os.path.join(out_dir, "evalues.csv")
    med_path = os.path.join(out_dir, "medians.csv")
    with open(ev_path, "w") as fh:
        fh.write("setting,calibrator,replicate,evalue\n")
        for gi, setting in enumerate(result.settings):
            for ci, cal in enumerate(result.calibrators):
                for r in range(result.evalues.shape[2]):
                    v = result.evalues[gi, ci, r]
                    if math.isnan(v):
                        continue
                    fh.write(f"{setting},{cal},{r},{_fmt(v)}\n")
    with open(med_path, "w") as fh:
        fh.write("setting,calibrator,median,is_infinite\n")
        for gi, setting in enumerate(result.settings):
            for ci, cal in enumerate(result.calibrators):
                med = result.medians[gi, ci]
                flag = "true" if math.isinf(med) else "false"
                fh.write(f"{setting},{cal},{_fmt(med)},{flag}\n")
    return ev_path, med_path


def run_experiment(cfg: ExperimentConfig, out_dir, progress=None) -> SweepResult:
    """run_sweep + CSV emission + a resolved copy of the config."""
    result = run_sweep(cfg, progress=progress)
    emit_csv(result, out_dir)
    with open(os.path.join(out_dir, "config.txt"), "w") as fh:
        fh.write(cfg.to_text())
    return result


def read_sweep_csv(path) -> list:
    """Read back an evalues.csv/medians.csv as a list of row dicts."""
    rows = []
    with open(path) as fh:
        header = fh.readline().strip().split(",")
        for line in fh:
            parts = line.rstrip("\n").split(",")
            row = dict(zip(header, parts))
            for key in ("evalue", "median"):
                if key in row:
                    row[key] = float(row[key])
            rows.append(row)
    return rows


def run_real(
    path,
    T: int,
    static_test: str = "e2d2",
    cal: Calibrator | None = None,
    n_boot: int = 1000,
    threshold: float = 20.0,
    seed=None,
    combine: str = "mean",
    **test_kwargs,
) -> TestReport:
    """Full pipeline for a timestamped edge-list file.

    Reads events, bins them into T equal-width snapshots, and runs the
    temporal test (defaults matching the real-data analyses: e2d2 static
    test, kappa:0.25 calibrator, B=1000 bootstrap iterations).
    """
    if cal is None:
        cal = Calibrator("kappa", 0.25)
    events, n, mapping = read_event_file(path)
    net = bin_events(events, T, n)
    report = run_temporal_test(
        net,
        static_test=static_test,
        cal=cal,
        threshold=threshold,
        seed=seed,
        combine=combine,
        n_boot=n_boot,
        **test_kwargs,
    )
    meta = {
        "input": os.path.basename(str(path)),
        "n": n,
        "T": T,
        "n_events": len(events),
        "relabeled": mapping is not None,
    }
    return replace(report, meta=meta)
