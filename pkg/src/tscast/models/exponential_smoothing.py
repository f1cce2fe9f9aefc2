"""Holt-Winters exponential smoothing with grid-restarted SSE optimization."""

from __future__ import annotations

from itertools import product

import numpy as np

from .._kernels import (
    SEASONAL_ADDITIVE,
    SEASONAL_MULTIPLICATIVE,
    SEASONAL_NONE,
    hw_sse,
)
from ..exceptions import InvalidConfig, NonPositiveValues
from ..timeseries import TimeSeries
from ._optim import GRID_CORNERS, bounded, nelder_mead_multistart
from .base import ForecastingModel

_TRENDS = ("none", "additive")
_SEASONALS = {
    "none": SEASONAL_NONE,
    "additive": SEASONAL_ADDITIVE,
    "multiplicative": SEASONAL_MULTIPLICATIVE,
}


def initial_state(
    y: np.ndarray, use_trend: bool, seasonal: str, m: int
) -> tuple[float, float, np.ndarray]:
    """Level/trend/seasonal start values for the recursion.

    Seasonal: level = mean of season 1, trend = (mean season 2 - mean season 1)/m,
    indices = first season relative to the level, normalized to sum 0 / mean 1.
    Non-seasonal behaves like season length 1.
    """
    if seasonal != "none":
        s1 = y[:m]
        level0 = float(s1.mean())
        trend0 = float(y[m : 2 * m].mean() - s1.mean()) / m if use_trend else 0.0
        if seasonal == "additive":
            seas0 = s1 - level0
            seas0 = seas0 - seas0.mean()
        else:
            seas0 = s1 / level0
            seas0 = seas0 / seas0.mean()
        return level0, trend0, seas0
    level0 = float(y[0])
    trend0 = float(y[1] - y[0]) if use_trend else 0.0
    return level0, trend0, np.zeros(1)


class ExponentialSmoothing(ForecastingModel):
    """Additive-trend Holt-Winters; smoothing weights picked by SSE.

    The (alpha[, beta][, gamma]) vector is constrained to [0, 1]^k and
    optimized by Nelder-Mead restarted from every corner of {0.2, 0.5, 0.8}^k.
    """

    def __init__(
        self, trend: str = "additive", seasonal: str = "none", m: int = 1
    ) -> None:
        super().__init__()
        if trend not in _TRENDS:
            raise InvalidConfig(f"trend must be one of {_TRENDS}, got {trend!r}")
        if seasonal not in _SEASONALS:
            raise InvalidConfig(
                f"seasonal must be one of {tuple(_SEASONALS)}, got {seasonal!r}"
            )
        if seasonal != "none" and (not isinstance(m, (int, np.integer)) or m < 2):
            raise InvalidConfig(f"seasonal smoothing needs season length m >= 2, got {m!r}")
        self.trend = trend
        self.seasonal = seasonal
        self.m = int(m) if seasonal != "none" else 1
        if seasonal != "none":
            self.min_train_length = 2 * self.m
        else:
            self.min_train_length = 2 if trend == "additive" else 1
        self.params_: np.ndarray | None = None
        self.sse_: float | None = None

    def fit(self, series: TimeSeries) -> "ExponentialSmoothing":
        y = self._check_univariate_input(series)
        if self.seasonal == "multiplicative" and (y <= 0).any():
            raise NonPositiveValues(
                "multiplicative seasonality needs strictly positive values"
            )
        use_trend = self.trend == "additive"
        code = _SEASONALS[self.seasonal]
        m = self.m
        level0, trend0, seas0 = initial_state(y, use_trend, self.seasonal, m)
        state = np.empty(2 + m)

        k = 1 + use_trend + (code != SEASONAL_NONE)

        def sse_of(x: np.ndarray) -> float:
            alpha = x[0]
            beta = x[1] if use_trend else 0.0
            gamma = x[-1] if code != SEASONAL_NONE else 0.0
            return hw_sse(
                y, alpha, beta, gamma, m, use_trend, code,
                level0, trend0, seas0, state,
            )

        starts = [np.array(c) for c in product(GRID_CORNERS, repeat=k)]
        best, sse = nelder_mead_multistart(bounded(sse_of), starts)
        sse = sse_of(best)  # rerun so `state` holds the winning end state
        self.params_ = best
        self.sse_ = float(sse)
        self._level = float(state[0])
        self._trend = float(state[1]) if use_trend else 0.0
        self._seas = state[2:].copy()
        self._T = len(y)
        self._remember(series)
        self._fitted = True
        return self

    def predict(self, n: int) -> TimeSeries:
        self._require_fitted()
        self._check_horizon(n)
        h = np.arange(1, n + 1, dtype=float)
        out = self._level + h * self._trend
        if self.seasonal != "none":
            phase = (self._T - 1 + np.arange(1, n + 1)) % self.m
            if self.seasonal == "additive":
                out = out + self._seas[phase]
            else:
                out = out * self._seas[phase]
        return self._wrap_forecast(out, n)
