"""Estimators of (alpha, sigma) from the empirical characteristic function.

Every pipeline has the same shape: standardize the sample, evaluate
|phi_n(t)|^2 on a fixed grid, regress y_k = log(-log|phi_n(t_k)|^2) on
omega_k = log t_k, then read alpha off the slope and sigma off the
intercept m = log(2 sigma^alpha), rescaled back to the data units.

alpha is reported as fitted; values above 2 are not clamped.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .ecf import TGrid, ecf_modulus_sq, transform_moduli
from .errors import NonPositiveAlpha, SampleTooSmall
from .regression import IRLS_MAX_ITER, IRLS_TOL, LineFit, lad_fit_irls, ols_fit
from .standardization import Standardization, mcculloch_initial, standardization_for
from .stable_model import as_sample

MIN_SAMPLE_SIZE = 10

LAD_GRID = TGrid.arithmetic(0.1, 0.05, 20)  # 0.10, 0.15, ..., 1.05
LAD_GRID_CAPPED = TGrid.uniform(0.1, 1.0, 20)
KW_GRID = TGrid.arithmetic(0.1, 0.1, 10)
LS_MID_GRID = TGrid.uniform(0.5, 1.0, 10)

LAD_GRIDS = {"formula": LAD_GRID, "capped": LAD_GRID_CAPPED}


@dataclass(frozen=True)
class Estimate:
    alpha: float
    sigma: float
    method: str
    grid: TGrid
    fit: LineFit
    standardization: Standardization | None
    notes: dict = field(default_factory=dict)

    def to_dict(self):
        st = self.standardization
        return {
            "method": self.method,
            "alpha": self.alpha,
            "sigma": self.sigma,
            "grid": self.grid.tolist(),
            "standardization": None if st is None else {
                "method": st.method, "location": st.location, "scale": st.scale,
            },
            "regression": self.fit.summary(),
            **({"notes": dict(self.notes)} if self.notes else {}),
        }


def sigma_from_intercept(m: float, alpha: float) -> float:
    """Invert m = log(2 sigma^alpha)."""
    if not alpha > 0.0:
        raise NonPositiveAlpha(f"cannot recover sigma from a non-positive index estimate {alpha!r}")
    return math.exp((m - math.log(2.0)) / alpha)


# Koutrouvelis (1980), Table 1: optimal number of points K on t_k = pi k / 25.
K_TABLE_ALPHAS = np.array([0.3, 0.5, 0.7, 0.9, 1.1, 1.3, 1.5, 1.9])
K_TABLE_NS = np.array([200, 800, 1600])
K_TABLE = np.array([
    [134, 124, 118],
    [86, 68, 56],
    [30, 24, 20],
    [28, 22, 18],
    [24, 18, 15],
    [22, 16, 14],
    [11, 12, 14],
    [9, 9, 10],
])


def optimal_k(alpha: float, n: int):
    """Optimal K at (alpha, n), bilinearly interpolated between table nodes and rounded.

    Returns ``(K, clamped)``; ``clamped`` is True when (alpha, n) lay outside
    the table and the nearest edge was used.
    """
    a = min(max(alpha, K_TABLE_ALPHAS[0]), K_TABLE_ALPHAS[-1])
    nn = min(max(n, K_TABLE_NS[0]), K_TABLE_NS[-1])
    clamped = a != alpha or nn != n
    per_n = np.array([np.interp(a, K_TABLE_ALPHAS, K_TABLE[:, j]) for j in range(K_TABLE_NS.size)])
    k = float(np.interp(nn, K_TABLE_NS, per_n))
    return max(2, int(math.floor(k + 0.5))), clamped


@dataclass(frozen=True)
class KSelection:
    """How the Koutrouvelis grid length is chosen.

    mode is ``"fixed"`` (value = K), ``"oracle"`` (value = the true alpha) or
    ``"mcculloch"`` (value unused; alpha comes from McCulloch's estimator).
    """

    mode: str
    value: float | None = None

    def __post_init__(self):
        if self.mode not in ("fixed", "oracle", "mcculloch"):
            raise ValueError(f"unknown K selection mode {self.mode!r}")
        if self.mode == "fixed" and (self.value is None or int(self.value) != self.value or self.value < 2):
            raise ValueError("fixed K must be an integer >= 2")
        if self.mode == "oracle" and (self.value is None or not 0.0 < self.value <= 2.0):
            raise ValueError("oracle K selection needs the true alpha in (0, 2]")

    @classmethod
    def parse(cls, text: str) -> "KSelection":
        """Parse ``fixed:<K>``, ``oracle:<alpha>`` or ``mcculloch``."""
        mode, _, arg = text.partition(":")
        if mode == "mcculloch" and not arg:
            return cls("mcculloch")
        if mode == "fixed" and arg:
            return cls("fixed", int(arg))
        if mode == "oracle" and arg:
            return cls("oracle", float(arg))
        raise ValueError(f"bad K selection {text!r}; expected fixed:<K>, oracle:<alpha> or mcculloch")

    def tag(self):
        if self.mode == "fixed":
            return f"fixed:{int(self.value)}"
        if self.mode == "oracle":
            return f"oracle:{self.value!r}"
        return "mcculloch"


def _finish(modsq, grid, fitter, method, st, notes=None):
    data = transform_moduli(modsq, grid)
    fit = fitter(data)
    scale = 1.0 if st is None else st.scale
    sigma = sigma_from_intercept(fit.m, fit.slope) * scale
    return Estimate(fit.slope, sigma, method, grid, fit, st, notes or {})


def _run(sample, grid, fitter, method, standardization, cf_modulus_sq, notes=None):
    if cf_modulus_sq is not None:
        # injected moduli stand in for the ECF of an already-standardized sample
        return _finish(np.asarray(cf_modulus_sq(grid.points), dtype=float), grid, fitter, method, None, notes)
    x = as_sample(sample)
    if x.size < MIN_SAMPLE_SIZE:
        raise SampleTooSmall(f"sample too small: need at least {MIN_SAMPLE_SIZE} values, got {x.size}")
    st = standardization_for(x, standardization)
    return _finish(ecf_modulus_sq(st.apply(x), grid.points), grid, fitter, method, st, notes)


def estimate_lad(sample, *, grid: str | TGrid = "formula", tol: float = IRLS_TOL,
                 max_iter: int = IRLS_MAX_ITER, cf_modulus_sq=None) -> Estimate:
    """LAD regression on 20 fixed points after trimmed-mean / Fama-Roll standardization.

    ``grid="formula"`` uses t_k = 0.1 + 0.05 (k - 1), k = 1..20 (ending at
    1.05); ``grid="capped"`` spreads 20 points uniformly over [0.1, 1.0].
    ``cf_modulus_sq``, if given, maps t to |phi(t)|^2 and replaces the ECF of
    the standardized sample (``sample`` is then ignored).
    """
    g = LAD_GRIDS[grid] if isinstance(grid, str) else grid
    return _run(sample, g, lambda d: lad_fit_irls(d, tol, max_iter), "lad", "fama-roll", cf_modulus_sq)


def estimate_kogon_williams(sample, *, standardization: str = "mcculloch", cf_modulus_sq=None) -> Estimate:
    """OLS on t = 0.1, 0.2, ..., 1.0 (Kogon & Williams)."""
    return _run(sample, KW_GRID, ols_fit, "kw", standardization, cf_modulus_sq)


def estimate_ls_mid_interval(sample, *, cf_modulus_sq=None) -> Estimate:
    """OLS on ten equally spaced points in [0.5, 1]."""
    return _run(sample, LS_MID_GRID, ols_fit, "ls-mid", "fama-roll", cf_modulus_sq)


def estimate_koutrouvelis(sample, k_sel: KSelection | str = "mcculloch", *, cf_modulus_sq=None) -> Estimate:
    """OLS on t_k = pi k / 25, k = 1..K with K chosen per ``k_sel``.

    Oracle and fixed modes standardize with the trimmed mean and Fama-Roll
    scale; the McCulloch mode standardizes with McCulloch's location and scale
    and looks K up at McCulloch's alpha estimate.
    """
    if isinstance(k_sel, str):
        k_sel = KSelection.parse(k_sel)
    notes = {"k_selection": k_sel.tag()}
    standardization = "fama-roll"
    if k_sel.mode == "fixed":
        k = int(k_sel.value)
    else:
        if k_sel.mode == "oracle":
            alpha0 = k_sel.value
        else:
            standardization = "mcculloch"
            if cf_modulus_sq is not None:
                raise ValueError("McCulloch K selection needs a sample, not injected moduli")
            alpha0 = mcculloch_initial(as_sample(sample)).alpha
            notes["alpha_initial"] = alpha0
        n = 0 if cf_modulus_sq is not None else np.asarray(sample).size
        k, clamped = optimal_k(alpha0, n if n else int(K_TABLE_NS[0]))
        if clamped:
            notes["k_table_clamped"] = True
    notes["k"] = k
    return _run(sample, TGrid.koutrouvelis(k), ols_fit, "koutrouvelis", standardization, cf_modulus_sq, notes)


METHODS = ("lad", "kw", "ls-mid", "koutrouvelis")


def parse_method(tag: str):
    """Map a method tag to ``sample -> Estimate``.

    Tags: ``lad``, ``lad-capped``, ``kw``, ``kw-fama-roll``, ``ls-mid`` and
    ``koutrouvelis:<k-selection>`` (e.g. ``koutrouvelis:oracle:1.3``).
    """
    if tag == "lad":
        return estimate_lad
    if tag == "lad-capped":
        return lambda s: estimate_lad(s, grid="capped")
    if tag == "kw":
        return estimate_kogon_williams
    if tag == "kw-fama-roll":
        return lambda s: estimate_kogon_williams(s, standardization="fama-roll")
    if tag == "ls-mid":
        return estimate_ls_mid_interval
    if tag.startswith("koutrouvelis:"):
        k_sel = KSelection.parse(tag.partition(":")[2])
        return lambda s: estimate_koutrouvelis(s, k_sel)
    raise ValueError(f"unknown method {tag!r}")
