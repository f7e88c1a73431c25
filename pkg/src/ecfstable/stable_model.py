"""Stable law parameters, the squared CF modulus and a Chambers-Mallows-Stuck sampler.

The characteristic function targeted throughout is

    log phi(t) = -sigma^alpha |t|^alpha (1 - i beta sign(t) tan(pi alpha / 2)) + i mu t,  alpha != 1
    log phi(t) = -sigma |t| (1 + i beta sign(t) (2/pi) log|t|) + i mu t,                   alpha == 1

i.e. the S1 parameterization of Samorodnitsky & Taqqu. The generator works on
standard variates (sigma=1, mu=0) and maps them to (sigma, mu) at the boundary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidSample


@dataclass(frozen=True)
class StableParams:
    alpha: float
    sigma: float = 1.0
    beta: float = 0.0
    mu: float = 0.0

    def __post_init__(self):
        for name in ("alpha", "sigma", "beta", "mu"):
            v = getattr(self, name)
            if not math.isfinite(v):
                raise ValueError(f"{name} must be finite, got {v!r}")
        if not 0.0 < self.alpha <= 2.0:
            raise ValueError(f"alpha must be in (0, 2], got {self.alpha!r}")
        if not self.sigma > 0.0:
            raise ValueError(f"sigma must be > 0, got {self.sigma!r}")
        if not -1.0 <= self.beta <= 1.0:
            raise ValueError(f"beta must be in [-1, 1], got {self.beta!r}")

    @property
    def symmetric(self) -> bool:
        return self.beta == 0.0


def as_sample(values, min_size: int = 2) -> np.ndarray:
    """Validate ``values`` as a sample: 1-d, finite, at least ``min_size`` long."""
    x = np.asarray(values, dtype=float)
    if x.ndim != 1:
        raise InvalidSample(f"sample must be one-dimensional, got shape {x.shape}")
    if x.size < min_size:
        raise InvalidSample(f"sample needs at least {min_size} values, got {x.size}")
    if not np.all(np.isfinite(x)):
        bad = int(np.flatnonzero(~np.isfinite(x))[0])
        raise InvalidSample(f"sample contains a non-finite value at index {bad}")
    return x


def theoretical_cf_modulus_sq(params: StableParams, t):
    """|phi(t)|^2 = exp(-2 sigma^alpha |t|^alpha); accepts scalar or array ``t``."""
    t = np.asarray(t, dtype=float)
    out = np.exp(-2.0 * params.sigma ** params.alpha * np.abs(t) ** params.alpha)
    return float(out) if out.ndim == 0 else out


def make_rng(seed, *stream) -> np.random.Generator:
    """Counter-based generator for ``seed``; ``stream`` selects an independent substream.

    ``make_rng(s, a, r)`` is the stream for replication ``r`` of setting ``a``
    under master seed ``s``; it does not depend on how many other streams exist.
    """
    ss = np.random.SeedSequence(entropy=seed, spawn_key=tuple(int(k) for k in stream))
    return np.random.Generator(np.random.Philox(ss))


def standard_stable_variates(alpha, beta, u, w):
    """CMS transform of V ~ U(-pi/2, pi/2), W ~ Exp(1) into S1(alpha, 1, beta, 0) variates."""
    if alpha == 1.0:
        half_pi = 0.5 * np.pi
        b = half_pi + beta * u
        return (b * np.tan(u) - beta * np.log(half_pi * w * np.cos(u) / b)) / half_pi
    if beta == 0.0:
        return (
            np.sin(alpha * u)
            / np.cos(u) ** (1.0 / alpha)
            * (np.cos((1.0 - alpha) * u) / w) ** ((1.0 - alpha) / alpha)
        )
    zeta = beta * math.tan(0.5 * math.pi * alpha)
    b = math.atan(zeta) / alpha
    s = (1.0 + zeta * zeta) ** (1.0 / (2.0 * alpha))
    return (
        s
        * np.sin(alpha * (u + b))
        / np.cos(u) ** (1.0 / alpha)
        * (np.cos(u - alpha * (u + b)) / w) ** ((1.0 - alpha) / alpha)
    )


def sample_stable(params: StableParams, n: int, seed=None, rng: np.random.Generator | None = None):
    """Draw ``n`` i.i.d. variates with the characteristic function of ``params``.

    Pass either ``seed`` (an int, or a tuple ``(master, *stream)``) or an
    explicit ``rng``.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if rng is None:
        if isinstance(seed, tuple):
            rng = make_rng(seed[0], *seed[1:])
        else:
            rng = make_rng(seed)
    u = np.pi * (rng.random(n) - 0.5)
    w = rng.standard_exponential(n)
    x = standard_stable_variates(params.alpha, params.beta, u, w)
    if params.alpha == 1.0:
        x = params.sigma * x + (2.0 / np.pi) * params.beta * params.sigma * math.log(params.sigma) + params.mu
    else:
        x = params.sigma * x + params.mu
    if not np.all(np.isfinite(x)):
        # u == -pi/2 exactly has probability zero but rng.random() can return 0.0
        raise RuntimeError("stable generator produced a non-finite variate")
    return x
