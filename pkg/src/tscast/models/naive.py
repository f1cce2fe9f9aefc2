"""Baseline models: seasonal repetition and straight-line drift."""

from __future__ import annotations

import numpy as np

from ..exceptions import InvalidConfig
from ..timeseries import TimeSeries
from .base import ForecastingModel


class NaiveSeasonal(ForecastingModel):
    """Repeat the last K observed values cyclically; K=1 is last-value carry."""

    def __init__(self, K: int = 1) -> None:
        super().__init__()
        if not isinstance(K, (int, np.integer)) or K < 1:
            raise InvalidConfig(f"K must be a positive int, got {K!r}")
        self.K = int(K)
        self.min_train_length = self.K
        self._last_cycle: np.ndarray | None = None

    def fit(self, series: TimeSeries) -> "NaiveSeasonal":
        values = self._check_univariate_input(series)
        self._last_cycle = values[-self.K :].copy()
        self._remember(series)
        self._fitted = True
        return self

    def predict(self, n: int) -> TimeSeries:
        self._require_fitted()
        self._check_horizon(n)
        steps = np.arange(n) % self.K
        return self._wrap_forecast(self._last_cycle[steps], n)


class NaiveDrift(ForecastingModel):
    """Extend the straight line through the first and last observations."""

    min_train_length = 2

    def __init__(self) -> None:
        super().__init__()
        self._last: float | None = None
        self._slope: float | None = None

    def fit(self, series: TimeSeries) -> "NaiveDrift":
        values = self._check_univariate_input(series)
        self._last = float(values[-1])
        self._slope = float(values[-1] - values[0]) / (len(values) - 1)
        self._remember(series)
        self._fitted = True
        return self

    def predict(self, n: int) -> TimeSeries:
        self._require_fitted()
        self._check_horizon(n)
        h = np.arange(1, n + 1, dtype=float)
        return self._wrap_forecast(self._last + h * self._slope, n)
