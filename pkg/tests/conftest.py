import cmath
import itertools
import math

import numpy as np
import pytest

ACCEPTANCE_LINES = []


def lad_pair_enumeration(y, omega):
    """Exact L1 line: for a two-parameter LAD fit some optimum passes through two data points."""
    y = np.asarray(y, dtype=float)
    omega = np.asarray(omega, dtype=float)
    best = (math.inf, None, None)
    for i, j in itertools.combinations(range(y.size), 2):
        if omega[i] == omega[j]:
            continue
        slope = (y[j] - y[i]) / (omega[j] - omega[i])
        m = y[i] - slope * omega[i]
        obj = float(np.abs(y - m - slope * omega).sum())
        if obj < best[0]:
            best = (obj, m, slope)
    return best


def stable_cf(t, alpha, sigma=1.0, beta=0.0, mu=0.0):
    """Complex characteristic function, written out directly from its definition."""
    if t == 0:
        return 1.0 + 0j
    s = math.copysign(1.0, t)
    if alpha != 1.0:
        log_phi = -(sigma ** alpha) * abs(t) ** alpha * (1 - 1j * beta * s * math.tan(math.pi * alpha / 2)) + 1j * mu * t
    else:
        log_phi = -sigma * abs(t) * (1 + 1j * beta * s * (2 / math.pi) * math.log(abs(t))) + 1j * mu * t
    return cmath.exp(log_phi)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
