"""Straight-line fits of y on omega: OLS and LAD via damped IRLS."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .ecf import RegressionData
from .errors import SingularDesign

IRLS_TOL = 1e-8
IRLS_MAX_ITER = 200


@dataclass(frozen=True)
class LineFit:
    m: float
    slope: float
    iterations: int
    converged: bool
    objective: float
    kind: str

    def residuals(self, data: RegressionData):
        return data.y - self.m - self.slope * data.omega

    def summary(self):
        return {
            "kind": self.kind,
            "intercept": self.m,
            "slope": self.slope,
            "iterations": self.iterations,
            "converged": self.converged,
            "objective": self.objective,
        }


def _weighted_line(y, omega, w):
    # 2x2 normal equations, centred on the weighted mean of omega for conditioning
    sw = w.sum()
    wbar = (w * omega).sum() / sw
    ybar = (w * y).sum() / sw
    d = omega - wbar
    sxx = (w * d * d).sum()
    if not sxx > 1e-300 or sxx <= 1e-14 * (w * omega * omega).sum():
        raise SingularDesign("all omega values are equal; slope is not identified")
    slope = (w * d * (y - ybar)).sum() / sxx
    return ybar - slope * wbar, slope


def _check(data: RegressionData):
    if len(data) < 2:
        raise SingularDesign("a line fit needs at least two points")


def ols_fit(data: RegressionData) -> LineFit:
    _check(data)
    m, slope = _weighted_line(data.y, data.omega, np.ones_like(data.y))
    e = data.y - m - slope * data.omega
    return LineFit(float(m), float(slope), 0, True, float(e @ e), "ols")


def lad_objective(data: RegressionData, fit: LineFit) -> float:
    return float(np.abs(data.y - fit.m - fit.slope * data.omega).sum())


def lad_fit_irls(data: RegressionData, tol: float = IRLS_TOL, max_iter: int = IRLS_MAX_ITER,
                 damping: float = 1.0) -> LineFit:
    """LAD line by iteratively reweighted least squares with w_i = 1/(damping + |e_i|).

    Starts from OLS and iterates until the largest coefficient change is
    below ``tol``. The weights never divide by zero, but the fixed point is
    only close to the exact L1 minimizer, so the iterate with the smallest
    sum of absolute residuals is returned. ``converged`` is False when
    ``max_iter`` was exhausted; the fit is still usable.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    _check(data)
    y, omega = data.y, data.omega
    m, slope = _weighted_line(y, omega, np.ones_like(y))
    e = y - m - slope * omega
    best = (float(np.abs(e).sum()), m, slope)
    converged = False
    it = 0
    while it < max_iter:
        it += 1
        m_new, slope_new = _weighted_line(y, omega, 1.0 / (damping + np.abs(e)))
        change = max(abs(m_new - m), abs(slope_new - slope))
        m, slope = m_new, slope_new
        e = y - m - slope * omega
        l1 = float(np.abs(e).sum())
        if l1 < best[0]:
            best = (l1, m, slope)
        if change < tol:
            converged = True
            break
    return LineFit(float(best[1]), float(best[2]), it, converged, best[0], "lad")
