"""The unified fit/predict contract shared by every forecasting model."""

from __future__ import annotations

import numpy as np

from ..exceptions import (
    InvalidConfig,
    NaNInput,
    NotFitted,
    SeriesTooShort,
    UnsupportedMultivariate,
)
from ..timeindex import TimeIndex
from ..timeseries import TimeSeries


class ForecastingModel:
    """fit(series) then predict(n) -> n points continuing the training index.

    predict before fit raises NotFitted; refitting overwrites all prior state.
    """

    #: shortest training series the model accepts with its current config
    min_train_length: int = 1

    def __init__(self) -> None:
        self._fitted = False
        self._train_index: TimeIndex | None = None
        self._component_names: list[str] | None = None

    # -- contract plumbing -----------------------------------------------------

    def _require_fitted(self) -> None:
        if not self._fitted:
            raise NotFitted(f"{type(self).__name__}: call fit() before predict()")

    def _remember(self, series: TimeSeries) -> None:
        self._train_index = series.index
        self._component_names = series.components

    def _wrap_forecast(self, values: np.ndarray, n: int) -> TimeSeries:
        """Build the forecast series on the index continuing the training one."""
        return TimeSeries(
            self._train_index.after(n), values, components=self._component_names
        )

    def _check_univariate_input(self, series: TimeSeries) -> np.ndarray:
        """Validate and return the raw 1-D training values."""
        if not series.is_univariate:
            raise UnsupportedMultivariate(
                f"{type(self).__name__} accepts univariate series only "
                f"({series.n_components} components given)"
            )
        if not series.is_deterministic:
            raise InvalidConfig(
                f"{type(self).__name__} trains on deterministic series "
                f"({series.n_samples} samples given)"
            )
        if series.has_nan():
            raise NaNInput(f"{type(self).__name__} requires NaN-free training data")
        if len(series) < self.min_train_length:
            raise SeriesTooShort(
                f"{type(self).__name__} needs at least {self.min_train_length} "
                f"points, got {len(series)}"
            )
        return series.univariate_values()

    @staticmethod
    def _check_horizon(n: int) -> None:
        if not isinstance(n, (int, np.integer)) or n < 1:
            raise InvalidConfig(f"forecast horizon must be a positive int, got {n!r}")

    # -- the contract ------------------------------------------------------------

    def fit(self, series: TimeSeries) -> "ForecastingModel":
        raise NotImplementedError

    def predict(self, n: int) -> TimeSeries:
        raise NotImplementedError
