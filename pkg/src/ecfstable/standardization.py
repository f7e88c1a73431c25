"""Robust location/scale standardization and McCulloch's quantile estimator.

Sample quantiles use linear interpolation between order statistics placed at
probability positions (j - 0.5)/n (the "hazen" rule), clamped to the sample
extremes outside [0.5/n, 1 - 0.5/n]. The same rule is used everywhere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.interpolate import RegularGridInterpolator

from .errors import EmptyAfterTrim, ZeroSpread
from .stable_model import StableParams, as_sample

FAMA_ROLL_DIVISOR = 1.654


def quantiles(sample, probs):
    return np.quantile(np.asarray(sample, dtype=float), probs, method="hazen")


def trimmed_mean(sample, trim: float = 0.25) -> float:
    """Mean after dropping floor(trim * n) order statistics from each tail."""
    if not 0.0 <= trim < 0.5:
        raise ValueError(f"trim must be in [0, 0.5), got {trim!r}")
    x = np.sort(np.asarray(sample, dtype=float))
    cut = math.floor(trim * x.size)
    kept = x[cut : x.size - cut]
    if kept.size == 0:
        raise EmptyAfterTrim(f"trimming {cut} values from each tail of {x.size} leaves nothing")
    return float(kept.mean())


def fama_roll_scale(sample) -> float:
    """(q(0.72) - q(0.28)) / 1.654, which equals sigma for the Cauchy law."""
    x = as_sample(sample)
    q28, q72 = quantiles(x, [0.28, 0.72])
    spread = q72 - q28
    if not spread > 0.0:
        raise ZeroSpread("the 0.28 and 0.72 sample quantiles coincide")
    return float(spread / FAMA_ROLL_DIVISOR)


# McCulloch (1986), tables III-V and VII.
_NU_ALPHA = np.array([2.439, 2.5, 2.6, 2.7, 2.8, 3.0, 3.2, 3.5, 4.0, 5.0, 6.0, 8.0, 10.0, 15.0, 25.0])
_NU_BETA = np.array([0.0, 0.1, 0.2, 0.3, 0.5, 0.7, 1.0])

# alpha = psi_1(nu_alpha, nu_beta); rows follow _NU_ALPHA, columns _NU_BETA
_PSI1 = np.array([
    [2.000, 2.000, 2.000, 2.000, 2.000, 2.000, 2.000],
    [1.916, 1.924, 1.924, 1.924, 1.924, 1.924, 1.924],
    [1.808, 1.813, 1.829, 1.829, 1.829, 1.829, 1.829],
    [1.729, 1.730, 1.737, 1.745, 1.745, 1.745, 1.745],
    [1.664, 1.663, 1.663, 1.668, 1.676, 1.676, 1.676],
    [1.563, 1.560, 1.553, 1.548, 1.547, 1.547, 1.547],
    [1.484, 1.480, 1.471, 1.460, 1.448, 1.438, 1.438],
    [1.391, 1.386, 1.378, 1.364, 1.337, 1.318, 1.318],
    [1.279, 1.273, 1.266, 1.250, 1.210, 1.184, 1.150],
    [1.128, 1.121, 1.114, 1.101, 1.067, 1.027, 0.973],
    [1.029, 1.021, 1.014, 1.004, 0.974, 0.935, 0.874],
    [0.896, 0.892, 0.884, 0.883, 0.855, 0.823, 0.769],
    [0.818, 0.812, 0.806, 0.801, 0.780, 0.756, 0.691],
    [0.698, 0.695, 0.692, 0.689, 0.676, 0.656, 0.597],
    [0.593, 0.590, 0.588, 0.586, 0.579, 0.563, 0.513],
])

# beta = psi_2(nu_alpha, nu_beta)
_PSI2 = np.array([
    [0.0, 2.160, 1.000, 1.000, 1.000, 1.000, 1.000],
    [0.0, 1.592, 3.390, 1.000, 1.000, 1.000, 1.000],
    [0.0, 0.759, 1.800, 1.000, 1.000, 1.000, 1.000],
    [0.0, 0.482, 1.048, 1.694, 1.000, 1.000, 1.000],
    [0.0, 0.360, 0.760, 1.232, 2.229, 1.000, 1.000],
    [0.0, 0.253, 0.518, 0.823, 1.575, 1.000, 1.000],
    [0.0, 0.203, 0.410, 0.632, 1.244, 1.906, 1.000],
    [0.0, 0.165, 0.332, 0.499, 0.943, 1.560, 1.000],
    [0.0, 0.136, 0.271, 0.404, 0.689, 1.230, 2.195],
    [0.0, 0.109, 0.216, 0.323, 0.539, 0.827, 1.917],
    [0.0, 0.096, 0.190, 0.284, 0.472, 0.693, 1.759],
    [0.0, 0.082, 0.163, 0.243, 0.412, 0.601, 1.596],
    [0.0, 0.074, 0.147, 0.220, 0.377, 0.546, 1.482],
    [0.0, 0.064, 0.128, 0.191, 0.330, 0.478, 1.362],
    [0.0, 0.056, 0.112, 0.167, 0.285, 0.428, 1.274],
])

_ALPHA = np.array([0.5, 0.6, 0.7, 0.8, 0.9, 1.0, 1.1, 1.2, 1.3, 1.4, 1.5, 1.6, 1.7, 1.8, 1.9, 2.0])
_BETA = np.array([0.0, 0.25, 0.5, 0.75, 1.0])

# nu_c = phi_3(alpha, beta); rows follow _ALPHA (ascending), columns _BETA
_PHI3 = np.array([
    [2.588, 3.073, 4.534, 6.636, 9.144],
    [2.337, 2.634, 3.542, 4.808, 6.247],
    [2.189, 2.392, 3.004, 3.844, 4.775],
    [2.098, 2.244, 2.676, 3.265, 3.912],
    [2.040, 2.149, 2.461, 2.886, 3.356],
    [2.000, 2.085, 2.311, 2.624, 2.973],
    [1.980, 2.040, 2.205, 2.435, 2.696],
    [1.965, 2.007, 2.125, 2.294, 2.491],
    [1.955, 1.984, 2.067, 2.188, 2.333],
    [1.946, 1.967, 2.022, 2.106, 2.211],
    [1.939, 1.952, 1.988, 2.045, 2.116],
    [1.933, 1.940, 1.962, 1.997, 2.043],
    [1.927, 1.930, 1.943, 1.961, 1.987],
    [1.921, 1.922, 1.927, 1.936, 1.947],
    [1.914, 1.915, 1.916, 1.918, 1.921],
    [1.908, 1.908, 1.908, 1.908, 1.908],
])

# nu_zeta = phi_5(alpha, beta)
_PHI5 = np.array([
    [0.0, -0.061, -0.279, -0.659, -1.198],
    [0.0, -0.078, -0.272, -0.581, -0.997],
    [0.0, -0.089, -0.262, -0.520, -0.853],
    [0.0, -0.096, -0.250, -0.469, -0.742],
    [0.0, -0.099, -0.237, -0.424, -0.652],
    [0.0, -0.098, -0.223, -0.380, -0.576],
    [0.0, -0.095, -0.208, -0.346, -0.508],
    [0.0, -0.090, -0.192, -0.310, -0.447],
    [0.0, -0.084, -0.173, -0.276, -0.390],
    [0.0, -0.075, -0.154, -0.241, -0.335],
    [0.0, -0.066, -0.134, -0.206, -0.283],
    [0.0, -0.056, -0.111, -0.170, -0.232],
    [0.0, -0.043, -0.088, -0.132, -0.179],
    [0.0, -0.030, -0.061, -0.092, -0.123],
    [0.0, -0.017, -0.032, -0.049, -0.064],
    [0.0, 0.000, 0.000, 0.000, 0.000],
])

_psi1 = RegularGridInterpolator((_NU_ALPHA, _NU_BETA), _PSI1)
_psi2 = RegularGridInterpolator((_NU_ALPHA, _NU_BETA), _PSI2)
_phi3 = RegularGridInterpolator((_ALPHA, _BETA), _PHI3)
_phi5 = RegularGridInterpolator((_ALPHA, _BETA), _PHI5)

MCCULLOCH_ALPHA_RANGE = (float(_ALPHA[0]), float(_ALPHA[-1]))


@dataclass(frozen=True)
class McCullochFit:
    alpha: float
    sigma: float
    beta: float
    mu: float
    out_of_range: bool

    @property
    def params(self) -> StableParams:
        return StableParams(self.alpha, self.sigma, self.beta, self.mu)


def _clip(v, lo, hi):
    return min(max(v, lo), hi), not lo <= v <= hi


def mcculloch_initial(sample) -> McCullochFit:
    """Quantile estimates of (alpha, sigma, beta, mu) from McCulloch's tables.

    Ratios outside the tabulated range are clamped to the boundary and
    reported through ``out_of_range``; alpha then lies in [0.5, 2].
    """
    x = as_sample(sample, min_size=5)
    q05, q25, q50, q75, q95 = quantiles(x, [0.05, 0.25, 0.5, 0.75, 0.95])
    iqr = q75 - q25
    if not (iqr > 0.0 and q95 > q05):
        raise ZeroSpread("quantile spread is zero; McCulloch ratios undefined")
    nu_alpha = (q95 - q05) / iqr
    nu_beta = (q95 + q05 - 2.0 * q50) / (q95 - q05)

    na, flag_a = _clip(nu_alpha, _NU_ALPHA[0], _NU_ALPHA[-1])
    nb, flag_b = _clip(abs(nu_beta), _NU_BETA[0], _NU_BETA[-1])
    # below the Gaussian entry is expected sampling noise near alpha = 2, not a table failure
    flag_a = flag_a and nu_alpha > _NU_ALPHA[-1]
    alpha = float(_psi1((na, nb)))
    beta = math.copysign(min(float(_psi2((na, nb))), 1.0), nu_beta)
    if nu_beta == 0.0:
        beta = 0.0

    ab = (alpha, abs(beta))
    sigma = iqr / float(_phi3(ab))
    zeta = q50 + sigma * math.copysign(1.0, beta) * float(_phi5(ab))
    if alpha == 1.0:
        mu = zeta
    else:
        mu = zeta - beta * sigma * math.tan(0.5 * math.pi * alpha)
    return McCullochFit(alpha, float(sigma), beta, float(mu), flag_a or flag_b)


@dataclass(frozen=True)
class Standardization:
    location: float
    scale: float
    method: str

    def apply(self, sample):
        return (np.asarray(sample, dtype=float) - self.location) / self.scale

    def invert(self, z):
        return np.asarray(z, dtype=float) * self.scale + self.location


STANDARDIZATIONS = ("fama-roll", "mcculloch")


def standardization_for(sample, method: str = "fama-roll") -> Standardization:
    if method == "fama-roll":
        return Standardization(trimmed_mean(sample, 0.25), fama_roll_scale(sample), method)
    if method == "mcculloch":
        fit = mcculloch_initial(sample)
        return Standardization(fit.mu, fit.sigma, method)
    raise ValueError(f"unknown standardization {method!r}; expected one of {STANDARDIZATIONS}")


def standardize(sample, method: str = "fama-roll"):
    """Return ((x - location) / scale, Standardization).

    The default uses the 25% trimmed mean and the Fama-Roll scale.
    """
    x = as_sample(sample)
    st = standardization_for(x, method)
    return st.apply(x), st
