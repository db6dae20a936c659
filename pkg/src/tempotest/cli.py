"""Command-line interface.

Subcommands:
  generate    sample a network model and write snapshot edge lists
  test        run the temporal community test on a timestamped edge list
  experiment  run a Monte Carlo sweep preset or config file
  calibrate   apply a p-to-e calibrator to one value

Exit codes: 0 ok, 1 usage error, 2 data/parameter error, 3 internal error.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
import traceback

import numpy as np


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors; this tool reserves 2 for data
    # errors, so remap
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="tempotest", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", parents=[], help="sample a network and write snapshots")
    g.add_argument("--model", required=True, choices=["er", "cl", "sbm", "corr-sbm", "dyn-sbm", "dyn-dcbm"])
    g.add_argument("--n", type=int, required=True, help="number of nodes")
    g.add_argument("--t", type=int, default=1, help="number of snapshots (default 1)")
    g.add_argument("--seed", type=int, default=None)
    g.add_argument("--out", required=True, help="output directory")
    g.add_argument("--p", type=float, default=0.01, help="er edge probability / cl target density")
    g.add_argument("--b", type=float, default=0.01, help="block base probability")
    g.add_argument("--delta", type=float, default=0.0, help="diagonal boost: B = b +- delta/2")
    g.add_argument("--k", type=int, default=2, help="number of communities")
    g.add_argument("--rho", type=float, default=0.25, help="corr-sbm edge persistence")
    g.add_argument("--pi-stay", type=float, default=0.9, help="label chain stay probability")
    g.add_argument("--alpha1", type=float, default=0.8, help="initial group-0 weight")
    g.add_argument("--epsilon", type=float, default=0.6, help="degree heterogeneity width")
    g.add_argument("--group1-frac", type=float, default=0.8, help="fraction of nodes in group 0 (static labels)")
    g.set_defaults(func=_cmd_generate)

    t = sub.add_parser("test", help="test a timestamped edge list for community structure")
    t.add_argument("--input", required=True, help="edge list file: src dst timestamp")
    t.add_argument("--bins", type=int, required=True, help="number of snapshots T")
    t.add_argument("--static", choices=["tw", "e2d2"], default="e2d2", help="per-snapshot test (default e2d2)")
    t.add_argument("--calibrator", default="kappa:0.25", help="max | avg | kappa:X (default kappa:0.25)")
    t.add_argument("--threshold", type=float, default=20.0)
    t.add_argument("--boot", type=int, default=None, help="bootstrap replicates (default: 50 tw / 1000 e2d2)")
    t.add_argument("--seed", type=int, default=None)
    t.add_argument("--json", default=None, help="write the full report as JSON to this path")
    t.add_argument("--tw-table", default=None, help="alternative Tracy-Widom CDF table")
    t.add_argument("--eig-mode", choices=["algebraic", "magnitude"], default="algebraic")
    t.add_argument("--add-one", action="store_true", help="e2d2: report (b+1)/(B+1) instead of b/B")
    t.add_argument(
        "--assume-independent",
        action="store_true",
        help="combine e-values by product (valid only for independent snapshots)",
    )
    t.set_defaults(func=_cmd_test)

    e = sub.add_parser("experiment", help="run a Monte Carlo sweep")
    grp = e.add_mutually_exclusive_group()
    grp.add_argument("--preset", default=None, help="bundled preset name (see --list)")
    grp.add_argument("--config", default=None, help="key=value config file")
    e.add_argument("--out", default=None, help="output directory for CSVs")
    e.add_argument("--scale", choices=["desk", "full"], default="desk")
    e.add_argument("--seed", type=int, default=None, help="override the preset seed")
    e.add_argument("--list", action="store_true", help="list bundled presets and exit")
    e.add_argument("--quiet", action="store_true")
    e.set_defaults(func=_cmd_experiment)

    c = sub.add_parser("calibrate", help="apply a calibrator to a p-value")
    c.add_argument("--p", type=float, required=True)
    c.add_argument("--calibrator", required=True, help="max | avg | kappa:X")
    c.set_defaults(func=_cmd_calibrate)
    return p


def _fmt_e(x: float) -> str:
    if math.isinf(x):
        return "inf"
    return f"{x:.6g}"


def _cmd_generate(args) -> int:
    from .generators import (
        MarkovLabelChain,
        chung_lu_scale_for_density,
        planted_block_matrix,
        sample_chung_lu,
        sample_correlated_sbm,
        sample_degree_weights,
        sample_dynamic_dcbm,
        sample_dynamic_sbm,
        sample_er,
        sample_sbm,
        split_labels,
    )
    from .graph_core import TemporalNetwork, write_snapshots
    from .seeding import make_rng, seed_sequence

    n, T, seed = args.n, args.t, args.seed
    if T < 1:
        raise ValueError("--t must be >= 1")
    labels = thetas = None
    if args.k == 2:
        static_labels = split_labels(n, args.group1_frac)
    else:
        static_labels = (np.arange(n) * args.k) // n
    if args.model == "er":
        snaps = [sample_er(n, args.p, make_rng(seed, 0, t)) for t in range(T)]
        net = TemporalNetwork(tuple(snaps))
    elif args.model == "cl":
        snaps = []
        thetas = []
        for t in range(T):
            theta = sample_degree_weights(n, args.epsilon, make_rng(seed, 2, t))
            scale = chung_lu_scale_for_density(theta, args.p)
            snaps.append(sample_chung_lu(theta, scale, make_rng(seed, 0, t)))
            thetas.append(theta)
        net = TemporalNetwork(tuple(snaps))
        thetas = np.array(thetas)
    elif args.model == "sbm":
        B = planted_block_matrix(args.b, args.delta, args.k)
        snaps = [sample_sbm(static_labels, B, make_rng(seed, 0, t)) for t in range(T)]
        net = TemporalNetwork(tuple(snaps))
        labels = np.broadcast_to(static_labels, (T, n))
    elif args.model == "corr-sbm":
        B = planted_block_matrix(args.b, args.delta, args.k)
        net = sample_correlated_sbm(static_labels, B, args.rho, T, seed_sequence(seed))
        labels = np.broadcast_to(static_labels, (T, n))
    else:
        B = planted_block_matrix(args.b, args.delta, args.k)
        off = (1 - args.pi_stay) / (args.k - 1)
        pi = np.full((args.k, args.k), off)
        np.fill_diagonal(pi, args.pi_stay)
        alpha = np.full(args.k, (1 - args.alpha1) / (args.k - 1))
        alpha[0] = args.alpha1
        chain = MarkovLabelChain(pi, alpha)
        if args.model == "dyn-sbm":
            net, labels = sample_dynamic_sbm(chain, B, n, T, seed_sequence(seed))
        else:
            net, labels, thetas = sample_dynamic_dcbm(chain, B, args.epsilon, n, T, seed_sequence(seed))

    paths = write_snapshots(net, args.out)
    with open(os.path.join(args.out, "params.txt"), "w") as fh:
        for key in ("model", "n", "t", "seed", "p", "b", "delta", "k", "rho", "pi_stay", "alpha1", "epsilon", "group1_frac"):
            fh.write(f"{key}={getattr(args, key)}\n")
    if labels is not None:
        with open(os.path.join(args.out, "labels.csv"), "w") as fh:
            fh.write("t,node,group\n")
            for t in range(T):
                for i in range(n):
                    fh.write(f"{t},{i},{labels[t][i]}\n")
    if thetas is not None:
        with open(os.path.join(args.out, "theta.csv"), "w") as fh:
            fh.write("t,node,theta\n")
            for t in range(T):
                for i in range(n):
                    fh.write(f"{t},{i},{thetas[t][i]!r}\n")
    print(f"wrote {len(paths)} snapshots to {args.out}")
    return 0


def _cmd_test(args) -> int:
    from .evalue import Calibrator
    from .harness import run_real
    from .spectral import load_tw1_reference

    cal = Calibrator.parse(args.calibrator)
    kwargs = {}
    if args.static == "tw":
        n_boot = 50 if args.boot is None else args.boot
        kwargs["mode"] = args.eig_mode
        if args.tw_table:
            kwargs["ref"] = load_tw1_reference(args.tw_table)
    else:
        n_boot = 1000 if args.boot is None else args.boot
        if args.add_one:
            kwargs["add_one"] = True
    report = run_real(
        args.input,
        args.bins,
        static_test=args.static,
        cal=cal,
        n_boot=n_boot,
        threshold=args.threshold,
        seed=args.seed,
        combine="product" if args.assume_independent else "mean",
        **kwargs,
    )
    print(f"input: {args.input} (n={report.meta['n']}, events={report.meta['n_events']}, T={args.bins})")
    print(f"static test: {report.static_test}   calibrator: {report.calibrator}   combine: {report.combine}")
    print("snapshot   p-value      e-value      loo-combined")
    for i, (p, e, l) in enumerate(zip(report.pvalues, report.evalues, report.loo)):
        print(f"{i:8d}   {p:<10.6g}   {_fmt_e(e):<10s}   {_fmt_e(l) if not math.isnan(l) else 'n/a'}")
    print(f"combined e-value: {_fmt_e(report.combined)}   threshold: {report.threshold:g}")
    print("decision: " + ("REJECT the no-community null" if report.reject else "no rejection"))
    if args.json:
        with open(args.json, "w") as fh:
            fh.write(report.to_json() + "\n")
        print(f"report written to {args.json}")
    return 0


def _cmd_experiment(args) -> int:
    from dataclasses import replace

    from .harness import list_presets, load_preset, read_config_file, run_experiment

    if args.list:
        for name in list_presets():
            print(name)
        return 0
    if not args.preset and not args.config:
        raise _UsageError("need --preset or --config (or --list)")
    if not args.out:
        raise _UsageError("need --out DIR")
    if args.preset:
        cfg = load_preset(args.preset, args.scale)
    else:
        cfg = read_config_file(args.config)
    if args.seed is not None:
        cfg = replace(cfg, seed=args.seed)

    progress = None
    if not args.quiet:
        def progress(gi, r, S, R):
            if r == R - 1:
                print(f"  grid point {gi + 1}/{S} done", flush=True)

    result = run_experiment(cfg, args.out, progress=progress)
    print(f"settings: {len(result.settings)}  calibrators: {len(result.calibrators)}  reps: {cfg.mc_reps}")
    if result.n_failed.sum():
        print(f"failed replicates per setting: {result.n_failed.tolist()}")
    print(f"medians written to {os.path.join(args.out, 'medians.csv')}")
    return 0


def _cmd_calibrate(args) -> int:
    from .evalue import Calibrator, calibrate

    e = calibrate(args.p, Calibrator.parse(args.calibrator))
    print("inf" if math.isinf(e) else repr(e))
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except _UsageError as exc:
        print(f"tempotest: error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OSError, RuntimeError) as exc:
        print(f"tempotest: error: {exc}", file=sys.stderr)
        return 2
    except Exception:
        traceback.print_exc()
        return 3


if __name__ == "__main__":
    sys.exit(main())
