"""Empirical characteristic function and the log(-log|phi|^2) linearization."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateECF

# |phi_n(t)|^2 outside [EPS, 1 - EPS] makes one of the two logs blow up
DEGENERACY_EPS = 1e-12


@dataclass(frozen=True)
class TGrid:
    points: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.points, dtype=float)
        if p.ndim != 1 or p.size < 2:
            raise ValueError("a t-grid needs at least two points")
        if not np.all(np.isfinite(p)) or p[0] <= 0.0 or np.any(np.diff(p) <= 0.0):
            raise ValueError("t-grid points must be finite, positive and strictly increasing")
        p.setflags(write=False)
        object.__setattr__(self, "points", p)

    def __len__(self):
        return self.points.size

    def __eq__(self, other):
        return isinstance(other, TGrid) and np.array_equal(self.points, other.points)

    def __hash__(self):
        return hash(self.points.tobytes())

    @classmethod
    def arithmetic(cls, start, step, k):
        """t_k = start + step * (k - 1), k = 1..K."""
        return cls(start + step * np.arange(k))

    @classmethod
    def uniform(cls, lo, hi, k):
        return cls(np.linspace(lo, hi, k))

    @classmethod
    def koutrouvelis(cls, k):
        """t_k = pi k / 25, k = 1..K."""
        return cls(np.pi * np.arange(1, k + 1) / 25.0)

    def tolist(self):
        return [float(v) for v in self.points]


@dataclass(frozen=True)
class RegressionData:
    y: np.ndarray
    omega: np.ndarray

    def __post_init__(self):
        y = np.asarray(self.y, dtype=float)
        omega = np.asarray(self.omega, dtype=float)
        if y.shape != omega.shape or y.ndim != 1:
            raise ValueError("y and omega must be 1-d and of equal length")
        if not (np.all(np.isfinite(y)) and np.all(np.isfinite(omega))):
            raise ValueError("regression data must be finite")
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "omega", omega)

    def __len__(self):
        return self.y.size


def ecf_at(sample, t):
    """(1/n) sum_j exp(i t x_j) for scalar or array ``t``."""
    x = np.asarray(sample, dtype=float)
    tt = np.asarray(t, dtype=float)
    phase = np.multiply.outer(tt, x)
    out = np.cos(phase).mean(axis=-1) + 1j * np.sin(phase).mean(axis=-1)
    return complex(out) if tt.ndim == 0 else out


def ecf_modulus_sq(sample, t):
    """|phi_n(t)|^2 evaluated on an array of t values."""
    x = np.asarray(sample, dtype=float)
    phase = np.multiply.outer(np.asarray(t, dtype=float), x)
    c = np.cos(phase).mean(axis=-1)
    s = np.sin(phase).mean(axis=-1)
    return c * c + s * s


def transform_moduli(modulus_sq, grid: TGrid, eps: float = DEGENERACY_EPS) -> RegressionData:
    """Map squared CF moduli on ``grid`` to (y_k, omega_k).

    Split out from :func:`transform_grid` so theoretical moduli can be fed in
    place of empirical ones.
    """
    m = np.asarray(modulus_sq, dtype=float)
    bad = ~((m >= eps) & (m <= 1.0 - eps))
    if np.any(bad):
        k = int(np.flatnonzero(bad)[0])
        raise DegenerateECF(grid.points[k], m[k])
    return RegressionData(np.log(-np.log(m)), np.log(grid.points))


def transform_grid(sample, grid: TGrid) -> RegressionData:
    return transform_moduli(ecf_modulus_sq(sample, grid.points), grid)
