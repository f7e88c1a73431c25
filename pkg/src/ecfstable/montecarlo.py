"""Monte Carlo benchmarking of the estimators and regression diagnostics.

Replication ``r`` of the ``i``-th alpha in a benchmark draws its sample from
the stream ``make_rng(master_seed, i, r)``; every method sees the same sample.
Work is split into contiguous replication blocks whose results are written
back by index, so reports do not depend on the number of workers.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .ecf import TGrid, ecf_modulus_sq, transform_moduli
from .errors import ConfigInvalid, EstimationError, ZeroVariance
from .estimators import MIN_SAMPLE_SIZE, parse_method, sigma_from_intercept
from .regression import lad_fit_irls, ols_fit
from .stable_model import StableParams, make_rng, sample_stable
from .standardization import standardize

DEFAULT_ALPHAS = (1.9, 1.5, 1.3, 1.1, 0.9, 0.7)
DEFAULT_METHODS = ("lad", "kw", "ls-mid", "koutrouvelis:mcculloch")
FAILURE_FLAG_FRACTION = 0.001


def bias_mse(estimates, true_value):
    """(mean, mean - truth, mean squared error about the truth)."""
    e = np.asarray(estimates, dtype=float)
    if e.size == 0:
        raise ValueError("bias_mse needs at least one estimate")
    mean = float(e.mean())
    d = e - true_value
    return mean, mean - true_value, float(np.mean(d * d))


@dataclass(frozen=True)
class BenchmarkConfig:
    alphas: tuple = DEFAULT_ALPHAS
    beta: float = 0.0
    n: int = 100
    M: int = 10000
    methods: tuple = DEFAULT_METHODS
    master_seed: int = 0
    sigma: float = 1.0
    mu: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "alphas", tuple(float(a) for a in self.alphas))
        object.__setattr__(self, "methods", tuple(self.methods))
        problems = []
        if not self.alphas:
            problems.append("alphas must not be empty")
        for a in self.alphas:
            if not 0.0 < a <= 2.0:
                problems.append(f"alpha must be in (0, 2], got {a!r}")
        if not -1.0 <= self.beta <= 1.0:
            problems.append(f"beta must be in [-1, 1], got {self.beta!r}")
        if not self.sigma > 0.0:
            problems.append(f"sigma must be > 0, got {self.sigma!r}")
        if not math.isfinite(self.mu):
            problems.append(f"mu must be finite, got {self.mu!r}")
        if self.M < 1:
            problems.append(f"M must be >= 1, got {self.M}")
        if self.n < MIN_SAMPLE_SIZE:
            problems.append(f"n must be >= {MIN_SAMPLE_SIZE}, got {self.n}")
        if self.master_seed < 0:
            problems.append(f"master_seed must be >= 0, got {self.master_seed}")
        if not self.methods:
            problems.append("methods must not be empty")
        for m in self.methods:
            try:
                parse_method(m)
            except ValueError as exc:
                problems.append(str(exc))
        if problems:
            raise ConfigInvalid(problems)

    def to_dict(self):
        d = asdict(self)
        d["alphas"] = list(self.alphas)
        d["methods"] = list(self.methods)
        return d


@dataclass(frozen=True)
class BenchmarkRow:
    method: str
    target: str  # "index" or "scale"
    alpha_true: float
    beta: float
    n: int
    M: int
    mean: float
    bias: float
    mse: float
    failures: int

    @property
    def flagged(self):
        return self.failures > FAILURE_FLAG_FRACTION * self.M


@dataclass
class BenchmarkReport:
    config: BenchmarkConfig
    rows: list = field(default_factory=list)
    # raw estimates, keyed by (method, alpha); arrays of shape (M, 2) with NaN for failures
    estimates: dict = field(default_factory=dict, repr=False)

    def row(self, method, alpha, target="index"):
        for r in self.rows:
            if r.method == method and r.alpha_true == alpha and r.target == target:
                return r
        raise KeyError((method, alpha, target))

    CSV_HEADER = "method,target,alpha_true,beta,n,M,mean,bias,mse,failures"

    def to_csv(self):
        lines = [self.CSV_HEADER]
        for r in self.rows:
            lines.append(",".join([
                r.method, r.target, repr(r.alpha_true), repr(r.beta), str(r.n), str(r.M),
                repr(r.mean), repr(r.bias), repr(r.mse), str(r.failures),
            ]))
        return "\n".join(lines) + "\n"


def _replicate_block(config: BenchmarkConfig, alpha_index: int, start: int, stop: int):
    params = StableParams(config.alphas[alpha_index], config.sigma, config.beta, config.mu)
    estimators = [parse_method(m) for m in config.methods]
    out = np.full((len(estimators), stop - start, 2), np.nan)
    for j, r in enumerate(range(start, stop)):
        x = sample_stable(params, config.n, rng=make_rng(config.master_seed, alpha_index, r))
        for i, est in enumerate(estimators):
            try:
                e = est(x)
            except EstimationError:
                continue
            out[i, j] = (e.alpha, e.sigma)
    return alpha_index, start, out


def _blocks(config, workers):
    size = max(1, min(250, math.ceil(config.M / max(1, workers))))
    for ai in range(len(config.alphas)):
        for start in range(0, config.M, size):
            yield ai, start, min(config.M, start + size)


def run_benchmark(config: BenchmarkConfig, threads: int | None = None) -> BenchmarkReport:
    """Estimate every (alpha, method) cell from ``config.M`` replications.

    Replications on which an estimator raises are counted in ``failures`` and
    left out of the aggregates. ``threads`` worker processes are used
    (default: all CPUs); results are bit-identical for any worker count.
    """
    workers = threads if threads is not None else (os.cpu_count() or 1)
    n_alpha = len(config.alphas)
    raw = np.full((n_alpha, len(config.methods), config.M, 2), np.nan)
    blocks = list(_blocks(config, workers))
    if workers <= 1 or len(blocks) == 1:
        results = (_replicate_block(config, *b) for b in blocks)
        for ai, start, out in results:
            raw[ai, :, start : start + out.shape[1]] = out
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_replicate_block, config, *b) for b in blocks]
            for f in futures:
                ai, start, out = f.result()
                raw[ai, :, start : start + out.shape[1]] = out

    report = BenchmarkReport(config)
    for ai, alpha in enumerate(config.alphas):
        for mi, method in enumerate(config.methods):
            est = raw[ai, mi]
            report.estimates[(method, alpha)] = est
            ok = np.isfinite(est[:, 0]) & np.isfinite(est[:, 1])
            failures = int(config.M - ok.sum())
            for target, col, truth in (("index", 0, alpha), ("scale", 1, config.sigma)):
                if ok.any():
                    mean, bias, mse = bias_mse(est[ok, col], truth)
                else:
                    mean = bias = mse = math.nan
                report.rows.append(BenchmarkRow(
                    method, target, alpha, config.beta, config.n, config.M, mean, bias, mse, failures,
                ))
    return report


@dataclass(frozen=True)
class VarianceProfile:
    t: np.ndarray
    variance: np.ndarray
    dropped: np.ndarray  # replications lost to a degenerate ECF, per t (or per sample when fitted)

    def argmin_t(self):
        return float(self.t[np.nanargmin(self.variance)])


def _true_line(params: StableParams, t):
    return math.log(2.0) + params.alpha * math.log(params.sigma) + params.alpha * np.log(t)


def residual_variance_profile(params: StableParams, n: int, M: int, grid: TGrid, use_true_line: bool = True,
                              seed=0, fit: str = "ols", cf_modulus_sq=None) -> VarianceProfile:
    """Variance across M simulated samples of the regression residual at each t.

    With ``use_true_line`` the raw (unstandardized) samples are used and the
    residual is y(t) - log(2 sigma^alpha) - alpha log t. Otherwise each sample
    is standardized, a line is fitted to all grid points (``fit`` is "ols" or
    "lad") and its residuals are collected; a sample with any degenerate grid
    point is dropped entirely. ``cf_modulus_sq`` replaces the ECF with fixed
    moduli (useful for checking the noiseless case).
    """
    if M < 2:
        raise ValueError("M must be >= 2")
    t = grid.points
    resid = np.full((M, t.size), np.nan)
    fitter = {"ols": ols_fit, "lad": lad_fit_irls}[fit]
    line = _true_line(params, t)
    for r in range(M):
        if cf_modulus_sq is not None:
            modsq = np.asarray(cf_modulus_sq(t), dtype=float)
        else:
            x = sample_stable(params, n, rng=make_rng(seed, r))
            if not use_true_line:
                x, _ = standardize(x)
            modsq = ecf_modulus_sq(x, t)
        if use_true_line:
            ok = (modsq > 0.0) & (modsq < 1.0)
            with np.errstate(divide="ignore", invalid="ignore"):
                resid[r, ok] = np.log(-np.log(modsq[ok])) - line[ok]
        else:
            try:
                data = transform_moduli(modsq, grid)
                resid[r] = fitter(data).residuals(data)
            except EstimationError:
                continue
    dropped = np.isnan(resid).sum(axis=0)
    with np.errstate(invalid="ignore", divide="ignore"):
        variance = np.array([np.var(c[~np.isnan(c)], ddof=1) if (~np.isnan(c)).sum() >= 2 else np.nan
                             for c in resid.T])
    return VarianceProfile(t.copy(), variance, dropped)


def residual_acf(residuals, max_lag: int):
    """Sample autocorrelation r(h), h = 0..max_lag, normalized by the lag-0 sum of squares."""
    e = np.asarray(residuals, dtype=float)
    if max_lag < 0 or e.size <= max_lag:
        raise ValueError(f"need more than max_lag={max_lag} residuals, got {e.size}")
    d = e - e.mean()
    denom = float(d @ d)
    if not denom > 0.0:
        raise ZeroVariance("residuals have zero variance")
    return np.array([float(d[: e.size - h] @ d[h:]) / denom for h in range(max_lag + 1)])


def sample_residuals(params: StableParams, n: int, grid: TGrid, seed=0, fit: str = "ols"):
    """Residuals of one regression on a standardized simulated sample (input for the ACF plot)."""
    x, _ = standardize(sample_stable(params, n, seed=seed))
    data = transform_moduli(ecf_modulus_sq(x, grid.points), grid)
    fitter = {"ols": ols_fit, "lad": lad_fit_irls}[fit]
    return fitter(data).residuals(data)


@dataclass(frozen=True)
class KSensitivity:
    k: np.ndarray
    mean_koutrouvelis: np.ndarray
    mean_lad: np.ndarray
    failures_koutrouvelis: np.ndarray
    failures_lad: np.ndarray


def k_sensitivity_curve(alpha: float, n: int, M: int, k_range, seed=0, sigma: float = 1.0,
                        cf_modulus_sq=None) -> KSensitivity:
    """Mean alpha estimate as a function of the number of grid points K.

    Two curves on the same standardized samples: OLS on t_k = pi k / 25,
    k = 1..K, and LAD on K equally spaced points in [0.1, 1.0].
    """
    ks = np.array(sorted(int(k) for k in k_range))
    if ks.size == 0 or ks[0] < 2:
        raise ValueError("every K must be >= 2")
    params = StableParams(alpha, sigma)
    kout = np.full((M, ks.size), np.nan)
    lad = np.full((M, ks.size), np.nan)
    grids = [(TGrid.koutrouvelis(k), TGrid.uniform(0.1, 1.0, k)) for k in ks]
    for r in range(M):
        if cf_modulus_sq is None:
            z, _ = standardize(sample_stable(params, n, rng=make_rng(seed, r)))
            modsq = lambda t: ecf_modulus_sq(z, t)  # noqa: E731
        else:
            modsq = cf_modulus_sq
        for j, (gk, gl) in enumerate(grids):
            for out, g, fitter in ((kout, gk, ols_fit), (lad, gl, lad_fit_irls)):
                try:
                    f = fitter(transform_moduli(modsq(g.points), g))
                    sigma_from_intercept(f.m, f.slope)
                except EstimationError:
                    continue
                out[r, j] = f.slope
    with np.errstate(invalid="ignore"):
        return KSensitivity(
            ks,
            np.nanmean(kout, axis=0),
            np.nanmean(lad, axis=0),
            np.isnan(kout).sum(axis=0),
            np.isnan(lad).sum(axis=0),
        )
