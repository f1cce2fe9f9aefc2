"""Theta-method forecaster: deseasonalize, SES the theta-line, recombine."""

from __future__ import annotations

from itertools import product

import numpy as np

from .._kernels import SEASONAL_NONE, hw_sse
from ..exceptions import InvalidConfig, NonPositiveValues, SeriesTooShort
from ..timeseries import TimeSeries
from ._optim import GRID_CORNERS, bounded, nelder_mead_multistart
from .base import ForecastingModel


def autocorrelations(y: np.ndarray, max_lag: int) -> np.ndarray:
    """r_1..r_max_lag with the standard biased normalization; 0 if var is 0."""
    y = np.asarray(y, dtype=float)
    d = y - y.mean()
    denom = float(d @ d)
    if denom == 0.0:
        return np.zeros(max_lag)
    return np.array([float(d[k:] @ d[:-k]) / denom for k in range(1, max_lag + 1)])


def is_seasonal(y: np.ndarray, m: int) -> bool:
    """|r_m| beyond the 90% band sqrt((1 + 2*sum r_k^2)/T) scaled by 1.645."""
    T = len(y)
    if m < 2 or T < m + 2:
        return False
    r = autocorrelations(y, m)
    band = 1.645 * np.sqrt((1.0 + 2.0 * np.sum(r[: m - 1] ** 2)) / T)
    return bool(abs(r[m - 1]) > band)


def seasonal_indices(y: np.ndarray, m: int) -> np.ndarray:
    """Multiplicative indices from the classical moving-average decomposition.

    Ratios to the centered moving average are averaged per phase (t mod m)
    and normalized to mean 1.  Needs T >= 2m so every phase is covered.
    """
    T = len(y)
    if m % 2 == 0:
        kernel = np.r_[0.5, np.ones(m - 1), 0.5] / m
    else:
        kernel = np.ones(m) / m
    ma = np.convolve(y, kernel, mode="valid")
    offset = (T - len(ma)) // 2
    sums = np.zeros(m)
    counts = np.zeros(m)
    for t in range(offset, offset + len(ma)):
        sums[t % m] += y[t] / ma[t - offset]
        counts[t % m] += 1
    idx = sums / counts
    return idx / idx.mean()


def _ses_level(u: np.ndarray) -> tuple[float, float]:
    """Final level and alpha of simple exponential smoothing, alpha by SSE."""
    state = np.empty(3)
    seas0 = np.zeros(1)

    def sse_of(x: np.ndarray) -> float:
        return hw_sse(u, x[0], 0.0, 0.0, 1, False, SEASONAL_NONE,
                      float(u[0]), 0.0, seas0, state)

    starts = [np.array(c) for c in product(GRID_CORNERS, repeat=1)]
    best, _ = nelder_mead_multistart(bounded(sse_of), starts)
    sse_of(best)
    return float(state[0]), float(best[0])


class Theta(ForecastingModel):
    """Two-theta-line combination anchored on the fitted linear trend.

    The series is (optionally) deseasonalized, a straight line is fitted, and
    SES tracks the scaled detrended part; the forecast extrapolates the line
    plus half the SES level of theta*(detrended), reseasonalized by repeating
    the last seasonal indices.
    """

    min_train_length = 2

    def __init__(self, m: int = 1, theta: float = 2.0) -> None:
        super().__init__()
        if not isinstance(m, (int, np.integer)) or m < 1:
            raise InvalidConfig(f"season length m must be a positive int, got {m!r}")
        self.m = int(m)
        self.theta = float(theta)

    def fit(self, series: TimeSeries) -> "Theta":
        y = self._check_univariate_input(series)
        T = len(y)
        self.seasonal_ = is_seasonal(y, self.m)
        if self.seasonal_:
            if T < 2 * self.m:
                raise SeriesTooShort(
                    f"seasonal decomposition needs T >= 2m = {2 * self.m}, got {T}"
                )
            if (y <= 0).any():
                raise NonPositiveValues(
                    "multiplicative deseasonalization needs strictly positive values"
                )
            self._indices = seasonal_indices(y, self.m)
            x = y / self._indices[np.arange(T) % self.m]
        else:
            self._indices = np.ones(self.m)
            x = y
        t = np.arange(T, dtype=float)
        self._line = np.polynomial.polynomial.polyfit(t, x, 1)  # [b0, b1]
        detrended = x - np.polynomial.polynomial.polyval(t, self._line)
        self._ses_level_, self.alpha_ = _ses_level(self.theta * detrended)
        self._T = T
        self._remember(series)
        self._fitted = True
        return self

    def predict(self, n: int) -> TimeSeries:
        self._require_fitted()
        self._check_horizon(n)
        t = self._T - 1 + np.arange(1, n + 1, dtype=float)
        out = np.polynomial.polynomial.polyval(t, self._line) + self._ses_level_ / 2.0
        if self.seasonal_:
            phase = (self._T - 1 + np.arange(1, n + 1)) % self.m
            out = out * self._indices[phase]
        return self._wrap_forecast(out, n)
