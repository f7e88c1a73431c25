"""Command-line interface: ``ecfstable {fit,simulate,benchmark,diagnose}``.

Data go to ``--out`` (or standard output); a JSON run manifest with every
resolved option is written next to ``--out`` as ``<out>.manifest.json`` and
echoed to the terminal. ``--from-manifest`` re-runs a recorded invocation.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .ecf import TGrid
from .errors import ConfigInvalid, EstimationError
from .estimators import (
    KSelection,
    estimate_kogon_williams,
    estimate_koutrouvelis,
    estimate_lad,
    estimate_ls_mid_interval,
)
from .montecarlo import (
    DEFAULT_ALPHAS,
    BenchmarkConfig,
    k_sensitivity_curve,
    residual_acf,
    residual_variance_profile,
    run_benchmark,
    sample_residuals,
)
from .stable_model import StableParams, sample_stable


class ParseError(ValueError):
    def __init__(self, path, line, text):
        self.line = line
        super().__init__(f"{path}:{line}: cannot parse {text!r} as a number")


class CLIError(Exception):
    pass


def fmt(v) -> str:
    """Round-trip-safe decimal text for a float."""
    return repr(float(v))


def read_values(path):
    """One number per line; blank lines and lines starting with '#' are skipped."""
    raw = Path(path).read_bytes()
    values = []
    for lineno, line in enumerate(raw.decode("utf-8").splitlines(), start=1):
        s = line.strip()
        if not s or s.startswith("#"):
            continue
        try:
            v = float(s)
        except ValueError:
            raise ParseError(path, lineno, s) from None
        if not math.isfinite(v):
            raise ParseError(path, lineno, s)
        values.append(v)
    return np.array(values), hashlib.sha256(raw).hexdigest()


def _emit(text: str, out):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _write_manifest(args, config: dict):
    manifest = {
        "subcommand": args.command,
        "config": config,
        "seed": config.get("seed"),
        "version": __version__,
        "outputs": [args.out] if args.out else [],
    }
    text = json.dumps(manifest, indent=2, sort_keys=True) + "\n"
    if args.out:
        Path(args.out + ".manifest.json").write_text(text)
        print(text, end="", file=sys.stdout)
    else:
        print(text, end="", file=sys.stderr)
    return manifest


# --- fit ---------------------------------------------------------------------

def cmd_fit(args):
    x, digest = read_values(args.input)
    if args.method == "lad":
        est = estimate_lad(x, grid=args.lad_grid)
    elif args.method == "kw":
        est = estimate_kogon_williams(x, standardization=args.kw_standardization)
    elif args.method == "ls-mid":
        est = estimate_ls_mid_interval(x)
    else:
        est = estimate_koutrouvelis(x, KSelection.parse(args.k_mode))
    report = est.to_dict()
    report["n"] = int(x.size)
    report["input"] = {"path": str(args.input), "sha256": digest}
    _emit(json.dumps(report, indent=2) + "\n", args.out)
    return {
        "input": str(args.input), "method": args.method, "lad_grid": args.lad_grid,
        "kw_standardization": args.kw_standardization, "k_mode": args.k_mode,
    }


# --- simulate ----------------------------------------------------------------

def cmd_simulate(args):
    try:
        params = StableParams(args.alpha, args.sigma, args.beta, args.mu)
    except ValueError as exc:
        raise CLIError(str(exc)) from None
    if args.n < 1:
        raise CLIError(f"n must be >= 1, got {args.n}")
    x = sample_stable(params, args.n, seed=args.seed)
    _emit("".join(fmt(v) + "\n" for v in x), args.out)
    return {"alpha": args.alpha, "sigma": args.sigma, "beta": args.beta, "mu": args.mu,
            "n": args.n, "seed": args.seed}


# --- benchmark ---------------------------------------------------------------

_CONFIG_KEYS = {
    "alphas": lambda s: [float(v) for v in s.split(",") if v.strip()],
    "beta": float,
    "n": int,
    "M": int,
    "methods": lambda s: [v.strip() for v in s.split(",") if v.strip()],
    "seed": int,
    "sigma": float,
    "mu": float,
}


def read_config(path):
    """Flat ``key = value`` file; keys mirror the benchmark flags."""
    out, problems = {}, []
    for lineno, line in enumerate(Path(path).read_text().splitlines(), start=1):
        s = line.split("#", 1)[0].strip()
        if not s:
            continue
        key, sep, value = s.partition("=")
        key = key.strip().lstrip("-").replace("-", "_")
        if key == "m":
            key = "M"
        if not sep or key not in _CONFIG_KEYS:
            problems.append(f"{path}:{lineno}: unknown or malformed entry {s!r}")
            continue
        try:
            out[key] = _CONFIG_KEYS[key](value.strip())
        except ValueError:
            problems.append(f"{path}:{lineno}: bad value for {key}: {value.strip()!r}")
    if problems:
        raise ConfigInvalid(problems)
    return out


def resolve_benchmark_config(args) -> dict:
    resolved = {"alphas": list(DEFAULT_ALPHAS), "beta": 0.0, "n": 100, "M": 10000,
                "methods": ["lad", "kw", "ls-mid", "koutrouvelis:mcculloch"],
                "seed": 0, "sigma": 1.0, "mu": 0.0}
    if args.config:
        resolved.update(read_config(args.config))
    for key in _CONFIG_KEYS:
        v = getattr(args, key, None)
        if v is not None:
            resolved[key] = _CONFIG_KEYS[key](v) if isinstance(v, str) else v
    return resolved


def cmd_benchmark(args):
    resolved = resolve_benchmark_config(args)
    config = BenchmarkConfig(
        alphas=resolved["alphas"], beta=resolved["beta"], n=resolved["n"], M=resolved["M"],
        methods=resolved["methods"], master_seed=resolved["seed"], sigma=resolved["sigma"],
        mu=resolved["mu"],
    )
    report = run_benchmark(config, threads=args.threads)
    _emit(report.to_csv(), args.out)
    for r in report.rows:
        if r.flagged:
            print(f"warning: {r.method} alpha={r.alpha_true}: {r.failures} of {r.M} replications failed",
                  file=sys.stderr)
    for a in config.alphas:
        if a < 1.0:
            print(f"note: alpha={a} < 1, where the Fama-Roll scale used for standardization is "
                  "not strictly valid", file=sys.stderr)
            break
    return resolved


# --- diagnose ----------------------------------------------------------------

def _diag_grid(args):
    if args.grid == "koutrouvelis":
        return TGrid.koutrouvelis(args.K)
    return TGrid.uniform(args.t_min, args.t_max, args.K)


def cmd_diagnose(args):
    params = StableParams(args.alpha, args.sigma)
    if args.kind == "residual-variance":
        grid = _diag_grid(args)
        prof = residual_variance_profile(params, args.n, args.M, grid, use_true_line=not args.fitted,
                                         seed=args.seed, fit=args.fit)
        lines = ["t\tvariance"] + [f"{fmt(t)}\t{fmt(v)}" for t, v in zip(prof.t, prof.variance)]
    elif args.kind == "acf":
        grid = _diag_grid(args)
        e = sample_residuals(params, args.n, grid, seed=args.seed, fit=args.fit)
        r = residual_acf(e, args.max_lag)
        lines = ["lag\tacf"] + [f"{h}\t{fmt(v)}" for h, v in enumerate(r)]
    else:
        curve = k_sensitivity_curve(args.alpha, args.n, args.M, range(args.k_min, args.k_max + 1),
                                    seed=args.seed, sigma=args.sigma)
        lines = ["K\tmean_alpha_koutrouvelis\tmean_alpha_lad"] + [
            f"{k}\t{fmt(a)}\t{fmt(b)}"
            for k, a, b in zip(curve.k, curve.mean_koutrouvelis, curve.mean_lad)
        ]
    _emit("\n".join(lines) + "\n", args.out)
    keys = ("kind", "alpha", "sigma", "n", "M", "seed", "grid", "K", "t_min", "t_max", "fitted",
            "fit", "max_lag", "k_min", "k_max")
    return {k: getattr(args, k) for k in keys}


# --- parser ------------------------------------------------------------------

def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="output file (default: standard output)")
    common.add_argument("--threads", type=int, default=None,
                        help="worker processes (default: all CPUs; results do not depend on it)")
    common.add_argument("--from-manifest", metavar="PATH",
                        help="replay the options recorded in a run manifest")

    p = argparse.ArgumentParser(prog="ecfstable", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    f = sub.add_parser("fit", parents=[common], help="estimate alpha and sigma from a data file")
    f.add_argument("input", nargs="?", help="file with one value per line")
    f.add_argument("--method", choices=["lad", "kw", "ls-mid", "koutrouvelis"], default="lad")
    f.add_argument("--k-mode", default="mcculloch", help="fixed:<K> | oracle:<alpha> | mcculloch")
    f.add_argument("--lad-grid", choices=["formula", "capped"], default="formula")
    f.add_argument("--kw-standardization", choices=["mcculloch", "fama-roll"], default="mcculloch")
    f.add_argument("--seed", type=int, default=None, help="unused; accepted for uniformity")

    s = sub.add_parser("simulate", parents=[common], help="draw a stable sample")
    s.add_argument("--alpha", type=float, default=1.5)
    s.add_argument("--sigma", type=float, default=1.0)
    s.add_argument("--beta", type=float, default=0.0)
    s.add_argument("--mu", type=float, default=0.0)
    s.add_argument("-n", "--n", type=int, default=100)
    s.add_argument("--seed", type=int, default=0)

    b = sub.add_parser("benchmark", parents=[common], help="Monte Carlo bias/MSE table")
    b.add_argument("--config", help="key = value file; flags override it")
    b.add_argument("--alphas", help="comma-separated list (default 1.9,1.5,1.3,1.1,0.9,0.7)")
    b.add_argument("--beta", type=float)
    b.add_argument("-n", "--n", type=int)
    b.add_argument("-M", "--M", type=int, dest="M")
    b.add_argument("--methods", help="comma-separated: lad, lad-capped, kw, kw-fama-roll, ls-mid, "
                                     "koutrouvelis:{mcculloch,oracle:<a>,fixed:<K>}")
    b.add_argument("--seed", type=int)
    b.add_argument("--sigma", type=float)
    b.add_argument("--mu", type=float)

    d = sub.add_parser("diagnose", parents=[common], help="plot data for the regression diagnostics")
    d.add_argument("kind", nargs="?", choices=["residual-variance", "acf", "k-sensitivity"])
    d.add_argument("--alpha", type=float, default=1.5)
    d.add_argument("--sigma", type=float, default=1.0)
    d.add_argument("-n", "--n", type=int, default=200)
    d.add_argument("-M", "--M", type=int, dest="M", default=500)
    d.add_argument("--seed", type=int, default=0)
    d.add_argument("--grid", choices=["uniform", "koutrouvelis"], default="uniform")
    d.add_argument("--K", type=int, default=28, help="number of grid points")
    d.add_argument("--t-min", type=float, default=0.1)
    d.add_argument("--t-max", type=float, default=2.0)
    d.add_argument("--fitted", action="store_true",
                   help="residual-variance: standardize and use per-sample fitted lines")
    d.add_argument("--fit", choices=["ols", "lad"], default="ols")
    d.add_argument("--max-lag", type=int, default=20)
    d.add_argument("--k-min", type=int, default=10)
    d.add_argument("--k-max", type=int, default=40)
    return p


COMMANDS = {"fit": cmd_fit, "simulate": cmd_simulate, "benchmark": cmd_benchmark, "diagnose": cmd_diagnose}


def _apply_manifest(args):
    manifest = json.loads(Path(args.from_manifest).read_text())
    if manifest.get("subcommand") != args.command:
        raise CLIError(f"manifest is for {manifest.get('subcommand')!r}, not {args.command!r}")
    for key, value in manifest["config"].items():
        if key == "alphas" or key == "methods":
            value = ",".join(str(v) for v in value)
        setattr(args, key, value)
    if args.command == "benchmark":
        args.config = None


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.from_manifest:
            _apply_manifest(args)
        if args.command == "fit" and not args.input:
            parser.error("fit: an input file is required")
        if args.command == "diagnose" and not args.kind:
            parser.error("diagnose: kind is required")
        config = COMMANDS[args.command](args)
        config["threads"] = args.threads if args.threads is not None else os.cpu_count()
        _write_manifest(args, config)
    except (ParseError, CLIError, ConfigInvalid, EstimationError, OSError, ValueError) as exc:
        print(f"ecfstable {args.command}: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
