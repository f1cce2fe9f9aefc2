"""Derivative-free minimization used by the classical models."""

from __future__ import annotations

import numpy as np
from scipy.optimize import minimize

#: restart corners per smoothing-parameter dimension
GRID_CORNERS = (0.2, 0.5, 0.8)


def nelder_mead(fn, x0: np.ndarray) -> tuple[np.ndarray, float]:
    """One Nelder-Mead run; returns the better of (start, optimum)."""
    x0 = np.asarray(x0, dtype=float)
    f0 = fn(x0)
    res = minimize(fn, x0, method="Nelder-Mead", options={"maxiter": 2000})
    if np.isfinite(res.fun) and res.fun < f0:
        return np.asarray(res.x, dtype=float), float(res.fun)
    return x0, float(f0)


def nelder_mead_multistart(fn, starts) -> tuple[np.ndarray, float]:
    """Best Nelder-Mead result over the given start points."""
    best_x, best_f = None, np.inf
    for x0 in starts:
        x, f = nelder_mead(fn, x0)
        if f < best_f:
            best_x, best_f = x, f
    if best_x is None:
        raise ValueError("no start points given")
    return best_x, best_f


def bounded(fn, lo: float = 0.0, hi: float = 1.0):
    """Wrap an objective to reject points outside [lo, hi]^k (and non-finite)."""

    def wrapped(x):
        x = np.asarray(x, dtype=float)
        if (x < lo).any() or (x > hi).any():
            return np.inf
        value = fn(x)
        return value if np.isfinite(value) else np.inf

    return wrapped
