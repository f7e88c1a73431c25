"""Regression estimators of the stable index and scale from the empirical characteristic function."""

__version__ = "0.1.0"

from .ecf import RegressionData, TGrid, ecf_at, transform_grid  # noqa: E402
from .estimators import (  # noqa: E402
    Estimate,
    KSelection,
    estimate_kogon_williams,
    estimate_koutrouvelis,
    estimate_lad,
    estimate_ls_mid_interval,
    sigma_from_intercept,
)
from .regression import LineFit, lad_fit_irls, ols_fit  # noqa: E402
from .stable_model import StableParams, sample_stable, theoretical_cf_modulus_sq  # noqa: E402
from .standardization import fama_roll_scale, mcculloch_initial, standardize, trimmed_mean  # noqa: E402

__all__ = [
    "Estimate", "KSelection", "LineFit", "RegressionData", "StableParams", "TGrid",
    "ecf_at", "estimate_kogon_williams", "estimate_koutrouvelis", "estimate_lad",
    "estimate_ls_mid_interval", "fama_roll_scale", "lad_fit_irls", "mcculloch_initial",
    "ols_fit", "sample_stable", "sigma_from_intercept", "standardize",
    "theoretical_cf_modulus_sq", "transform_grid", "trimmed_mean",
]
