"""Frequency-domain forecaster: polynomial trend plus the top-k harmonics."""

from __future__ import annotations

import numpy as np

from ..exceptions import InvalidConfig, TooManyFrequencies
from ..timeseries import TimeSeries
from .base import ForecastingModel


class FFTForecaster(ForecastingModel):
    """Keep the top_k strongest frequency bins of the detrended series.

    Bins are ranked by spectral amplitude after a least-squares polynomial
    detrend (degree 0-3).  The polynomial and the kept harmonics are then
    re-estimated in one joint least squares: a plain detrend-then-filter
    pass leaks part of the trend into the dropped bins, which both distorts
    the trend extrapolation and discards signal.  Harmonics repeat with
    period T past the end of the series.
    """

    min_train_length = 8

    def __init__(self, trend_degree: int = 0, top_k: int = 3) -> None:
        super().__init__()
        if trend_degree not in (0, 1, 2, 3):
            raise InvalidConfig(f"trend_degree must be 0..3, got {trend_degree!r}")
        if not isinstance(top_k, (int, np.integer)) or top_k < 1:
            raise InvalidConfig(f"top_k must be a positive int, got {top_k!r}")
        self.trend_degree = int(trend_degree)
        self.top_k = int(top_k)

    def _design(self, t: np.ndarray) -> np.ndarray:
        T = self._T
        cols = [t**d for d in range(self.trend_degree + 1)]
        for k in self._bins:
            if k == 0:
                continue  # DC is the degree-0 column
            w = 2.0 * np.pi * k / T
            cols.append(np.cos(w * t))
            if 2 * k != T:  # sine vanishes identically at the Nyquist bin
                cols.append(np.sin(w * t))
        return np.column_stack(cols)

    def fit(self, series: TimeSeries) -> "FFTForecaster":
        y = self._check_univariate_input(series)
        T = len(y)
        n_bins = T // 2 + 1
        if self.top_k > n_bins:
            raise TooManyFrequencies(
                f"top_k={self.top_k} exceeds the {n_bins} bins of a length-{T} spectrum"
            )
        t = np.arange(T, dtype=float)
        poly = np.polynomial.polynomial.polyfit(t, y, self.trend_degree)
        resid = y - np.polynomial.polynomial.polyval(t, poly)
        amps = np.abs(np.fft.rfft(resid))
        # strongest first; equal amplitudes resolved by lower bin number
        order = np.lexsort((np.arange(len(amps)), -amps))
        self._T = T
        self._bins = np.sort(order[: self.top_k])
        A = self._design(t)
        self._coef, *_ = np.linalg.lstsq(A, y, rcond=None)
        self._remember(series)
        self._fitted = True
        return self

    def predict(self, n: int) -> TimeSeries:
        self._require_fitted()
        self._check_horizon(n)
        t = self._T - 1 + np.arange(1, n + 1, dtype=float)
        out = self._design(t) @ self._coef
        return self._wrap_forecast(out, n)
