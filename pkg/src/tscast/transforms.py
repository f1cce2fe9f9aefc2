"""Invertible per-component preprocessing: scalers, Box-Cox, NaN filling, pipelines."""

from __future__ import annotations

import numpy as np

from .exceptions import (
    AllNaNComponent,
    NaNInput,
    NotFitted,
    NotInvertible,
    NonPositiveValues,
)
from .timeseries import TimeSeries

# Box-Cox lambda candidates: -2.0, -1.9, ..., 2.0.
_BOXCOX_GRID = np.round(np.arange(-20, 21) / 10.0, 1)


class Transformer:
    """Base class: fit on one series, then transform/inverse any series.

    Statistics are computed per component, pooled over time and samples.
    """

    invertible = True

    def __init__(self) -> None:
        self._fitted = False

    # -- subclass hooks ------------------------------------------------------

    def _fit_values(self, values: np.ndarray) -> None:
        raise NotImplementedError

    def _apply(self, values: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def _invert(self, values: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def _check_input(self, values: np.ndarray) -> None:
        if np.isnan(values).any():
            raise NaNInput(f"{type(self).__name__} requires NaN-free input")

    # -- public API ------------------------------------------------------------

    def fit(self, series: TimeSeries) -> "Transformer":
        self._check_input(series.values)
        self._fit_values(series.values)
        self._fitted = True
        return self

    def transform(self, series: TimeSeries) -> TimeSeries:
        if not self._fitted:
            raise NotFitted(f"{type(self).__name__} is not fitted")
        self._check_input(series.values)
        return series._with_values(self._apply(series.values))

    def fit_transform(self, series: TimeSeries) -> TimeSeries:
        return self.fit(series).transform(series)

    def inverse_transform(self, series: TimeSeries) -> TimeSeries:
        if not self.invertible:
            raise NotInvertible(f"{type(self).__name__} has no inverse")
        if not self._fitted:
            raise NotFitted(f"{type(self).__name__} is not fitted")
        return series._with_values(self._invert(series.values))


class MinMaxScaler(Transformer):
    """Affine map sending each component's fitted range onto [0, 1].

    New data outside the fitted range maps outside [0, 1]; values are never
    clipped.  A constant component uses a unit range so it maps to zeros.
    """

    def __init__(self) -> None:
        super().__init__()
        self._min: np.ndarray | None = None
        self._range: np.ndarray | None = None

    def _fit_values(self, values: np.ndarray) -> None:
        lo = values.min(axis=(0, 2))
        hi = values.max(axis=(0, 2))
        rng = hi - lo
        rng[rng == 0.0] = 1.0
        self._min = lo
        self._range = rng

    def _apply(self, values: np.ndarray) -> np.ndarray:
        return (values - self._min[None, :, None]) / self._range[None, :, None]

    def _invert(self, values: np.ndarray) -> np.ndarray:
        return values * self._range[None, :, None] + self._min[None, :, None]


class StandardScaler(Transformer):
    """Map each component to zero mean and unit variance.

    A zero-variance component keeps std=1 so it maps to zeros instead of NaN.
    """

    def __init__(self) -> None:
        super().__init__()
        self._mean: np.ndarray | None = None
        self._std: np.ndarray | None = None

    def _fit_values(self, values: np.ndarray) -> None:
        flat = values.transpose(1, 0, 2).reshape(values.shape[1], -1)
        self._mean = flat.mean(axis=1)
        std = flat.std(axis=1)
        std[std == 0.0] = 1.0
        self._std = std

    def _apply(self, values: np.ndarray) -> np.ndarray:
        return (values - self._mean[None, :, None]) / self._std[None, :, None]

    def _invert(self, values: np.ndarray) -> np.ndarray:
        return values * self._std[None, :, None] + self._mean[None, :, None]


def _boxcox_loglik(x: np.ndarray, lam: float) -> float:
    # Gaussian profile log-likelihood of the transformed data (constants dropped).
    if lam == 0.0:
        z = np.log(x)
    else:
        z = (np.power(x, lam) - 1.0) / lam
    var = z.var()
    if var <= 0.0:
        var = np.finfo(float).tiny
    n = x.size
    return -0.5 * n * np.log(var) + (lam - 1.0) * np.log(x).sum()


class BoxCox(Transformer):
    """Box-Cox power transform; lambda picked per component by grid-search MLE.

    Candidate lambdas are -2.0 to 2.0 in steps of 0.1; ties keep the smallest.
    """

    def __init__(self) -> None:
        super().__init__()
        self.lambda_: np.ndarray | None = None

    def _check_input(self, values: np.ndarray) -> None:
        super()._check_input(values)
        if (values <= 0.0).any():
            raise NonPositiveValues("Box-Cox requires strictly positive values")

    def _fit_values(self, values: np.ndarray) -> None:
        lams = np.empty(values.shape[1])
        for c in range(values.shape[1]):
            x = values[:, c, :].ravel()
            scores = [_boxcox_loglik(x, lam) for lam in _BOXCOX_GRID]
            lams[c] = _BOXCOX_GRID[int(np.argmax(scores))]
        self.lambda_ = lams

    def _apply(self, values: np.ndarray) -> np.ndarray:
        out = np.empty_like(values)
        for c, lam in enumerate(self.lambda_):
            x = values[:, c, :]
            out[:, c, :] = np.log(x) if lam == 0.0 else (np.power(x, lam) - 1.0) / lam
        return out

    def _invert(self, values: np.ndarray) -> np.ndarray:
        out = np.empty_like(values)
        for c, lam in enumerate(self.lambda_):
            z = values[:, c, :]
            if lam == 0.0:
                out[:, c, :] = np.exp(z)
            else:
                out[:, c, :] = np.power(lam * z + 1.0, 1.0 / lam)
        return out


class MissingFiller(Transformer):
    """Linear interpolation of interior NaN; edges take the nearest finite value.

    Filling happens independently per component and sample; not invertible.
    """

    invertible = False

    def _check_input(self, values: np.ndarray) -> None:
        pass  # NaN is the whole point here

    def _fit_values(self, values: np.ndarray) -> None:
        pass  # stateless

    def _apply(self, values: np.ndarray) -> np.ndarray:
        out = values.copy()
        T = values.shape[0]
        grid = np.arange(T, dtype=float)
        for c in range(values.shape[1]):
            for s in range(values.shape[2]):
                col = out[:, c, s]
                finite = np.isfinite(col)
                if not finite.any():
                    raise AllNaNComponent(
                        f"component {c!r} sample {s!r} has no finite values"
                    )
                if finite.all():
                    continue
                # np.interp holds the boundary values flat outside the known range.
                col[~finite] = np.interp(grid[~finite], grid[finite], col[finite])
        return out


class Pipeline:
    """Apply transformers left to right; invert in reverse order."""

    def __init__(self, stages: list[Transformer]) -> None:
        self.stages = list(stages)

    @property
    def invertible(self) -> bool:
        return all(stage.invertible for stage in self.stages)

    def fit_transform(self, series: TimeSeries) -> TimeSeries:
        for stage in self.stages:
            series = stage.fit_transform(series)
        return series

    def transform(self, series: TimeSeries) -> TimeSeries:
        for stage in self.stages:
            series = stage.transform(series)
        return series

    def inverse_transform(self, series: TimeSeries) -> TimeSeries:
        if not self.invertible:
            bad = [type(s).__name__ for s in self.stages if not s.invertible]
            raise NotInvertible(f"pipeline contains non-invertible stages: {bad}")
        for stage in reversed(self.stages):
            series = stage.inverse_transform(series)
        return series
