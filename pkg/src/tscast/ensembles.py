"""Combine several models into one forecaster: plain mean or learned weights."""

from __future__ import annotations

import numpy as np

from .exceptions import DegenerateSplit, InvalidConfig, MemberFailure
from .models.base import ForecastingModel
from .timeseries import TimeSeries


def nnls_weights(F: np.ndarray, a: np.ndarray, tol: float = 1e-10,
                 max_iter: int = 100_000) -> np.ndarray:
    """min ||F w - a||^2 s.t. w >= 0, by projected coordinate descent."""
    G = F.T @ F
    c = F.T @ a
    M = F.shape[1]
    w = np.zeros(M)
    for _ in range(max_iter):
        delta = 0.0
        for i in range(M):
            if G[i, i] == 0.0:
                continue
            new = max(0.0, w[i] + (c[i] - G[i] @ w) / G[i, i])
            delta = max(delta, abs(new - w[i]))
            w[i] = new
        if delta < tol:
            break
    return w


class Ensemble(ForecastingModel):
    """Mean or regression-weighted combination of member models.

    Members are given as factories (callables returning fresh, unfitted
    models) so the learned mode can fit throwaway copies on a split before
    the final refit on the full series.
    """

    def __init__(self, members, mode: str = "naive_mean", rho: float = 0.7) -> None:
        super().__init__()
        members = list(members)
        if len(members) < 2:
            raise InvalidConfig(f"an ensemble needs >= 2 members, got {len(members)}")
        if mode not in ("naive_mean", "learned"):
            raise InvalidConfig(f"mode must be naive_mean or learned, got {mode!r}")
        if mode == "learned" and not 0.0 < rho < 1.0:
            raise InvalidConfig(f"training fraction rho must be in (0, 1), got {rho}")
        self.members = members
        self.mode = mode
        self.rho = float(rho)
        self.weights_: np.ndarray | None = None
        self._probe_models = [self._fresh(i) for i in range(len(members))]
        self.min_train_length = max(m.min_train_length for m in self._probe_models)

    def _fresh(self, i: int) -> ForecastingModel:
        try:
            model = self.members[i]()
        except Exception as err:  # noqa: BLE001 - reported with member index
            raise MemberFailure(i, err) from err
        if not isinstance(model, ForecastingModel):
            raise MemberFailure(
                i, TypeError(f"factory returned {type(model).__name__}")
            )
        return model

    def _fit_member(self, i: int, series: TimeSeries) -> ForecastingModel:
        model = self._fresh(i)
        try:
            model.fit(series)
        except Exception as err:  # noqa: BLE001
            raise MemberFailure(i, err) from err
        return model

    def _member_predict(self, i: int, model: ForecastingModel, n: int) -> np.ndarray:
        try:
            return model.predict(n).values[:, :, 0]
        except Exception as err:  # noqa: BLE001
            raise MemberFailure(i, err) from err

    def fit(self, series: TimeSeries) -> "Ensemble":
        if self.mode == "learned":
            need = max(m.min_train_length for m in self._probe_models)
            try:
                left, right = series.split_after(self.rho)
            except Exception as err:
                raise DegenerateSplit(f"cannot split at rho={self.rho}: {err}") from err
            if len(left) < need:
                raise DegenerateSplit(
                    f"left split has {len(left)} points; members need {need}"
                )
            holdout = len(right)
            trial = [self._fit_member(i, left) for i in range(len(self.members))]
            F = np.column_stack(
                [self._member_predict(i, m, holdout).reshape(-1)
                 for i, m in enumerate(trial)]
            )
            self.weights_ = nnls_weights(F, right.values[:, :, 0].reshape(-1))
        self._fitted_members = [
            self._fit_member(i, series) for i in range(len(self.members))
        ]
        self._remember(series)
        self._fitted = True
        return self

    def predict(self, n: int) -> TimeSeries:
        self._require_fitted()
        self._check_horizon(n)
        preds = np.stack(
            [self._member_predict(i, m, n)
             for i, m in enumerate(self._fitted_members)],
            axis=0,
        )  # (M, n, C)
        if self.mode == "naive_mean":
            out = preds.mean(axis=0)
        else:
            out = np.tensordot(self.weights_, preds, axes=(0, 0))
        return self._wrap_forecast(out, n)
