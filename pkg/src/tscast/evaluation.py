"""Metrics, expanding-origin historical forecasts, backtesting, grid search."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .exceptions import (
    BacktestModelError,
    EmptyGrid,
    EmptyIntersection,
    GridSearchFailed,
    IndexMismatch,
    InvalidConfig,
    MissingInsample,
    PlanInfeasible,
    ZeroDenominator,
)
from .timeindex import resolve_point
from .timeseries import TimeSeries

METRIC_KINDS = ("mae", "mse", "rmse", "mape", "smape", "mase", "pinball")


def _align(actual: TimeSeries, pred: TimeSeries) -> tuple[np.ndarray, np.ndarray]:
    """Component-matched values over the time intersection, (T, C) each."""
    missing = [c for c in actual.components if c not in pred.components]
    if missing:
        raise IndexMismatch(f"prediction lacks components {missing}")
    if actual.index.step != pred.index.step:
        raise EmptyIntersection(
            f"different time steps: {actual.index.step} vs {pred.index.step}"
        )
    offset = actual.index.offset_to(pred.start)
    if offset is None:
        raise EmptyIntersection("series are on incompatible grids")
    lo_a = max(0, offset)
    hi_a = min(len(actual), len(pred) + offset)
    if lo_a >= hi_a:
        raise EmptyIntersection(
            f"no overlap between [{actual.start}, {actual.end}] and "
            f"[{pred.start}, {pred.end}]"
        )
    cols = [pred.components.index(c) for c in actual.components]
    a = actual.values[lo_a:hi_a]
    a = a[:, :, 0] if actual.is_deterministic else np.median(a, axis=2)
    p = pred.values[lo_a - offset : hi_a - offset][:, cols, :]
    return a, p


def _reduce(pred_block: np.ndarray, q: float) -> np.ndarray:
    """Collapse the sample axis: empirical q-quantile (0.5 = median)."""
    if pred_block.shape[2] == 1:
        return pred_block[:, :, 0]
    return np.quantile(pred_block, q, axis=2)


def metric(
    kind: str,
    actual: TimeSeries,
    pred: TimeSeries,
    insample: TimeSeries | None = None,
    m: int | None = None,
    q: float = 0.5,
) -> float:
    """Score a forecast on the time intersection with the actuals.

    Stochastic predictions are reduced to their median first (the empirical
    q-quantile for the pinball loss).  MASE needs the training series and a
    season length m for the scaled denominator.
    """
    if kind not in METRIC_KINDS:
        raise InvalidConfig(f"unknown metric {kind!r} (available: {METRIC_KINDS})")
    if not 0.0 < q < 1.0:
        raise InvalidConfig(f"quantile must be in (0, 1), got {q}")
    a, p_block = _align(actual, pred)
    p = _reduce(p_block, q if kind == "pinball" else 0.5)
    e = a - p
    if kind == "mae":
        return float(np.abs(e).mean())
    if kind == "mse":
        return float((e**2).mean())
    if kind == "rmse":
        return float(np.sqrt((e**2).mean()))
    if kind == "mape":
        if (a == 0).any():
            raise ZeroDenominator("MAPE undefined: actual contains zeros")
        return float(np.abs(e / a).mean() * 100.0)
    if kind == "smape":
        denom = np.abs(a) + np.abs(p)
        if (denom == 0).any():
            raise ZeroDenominator("sMAPE undefined: actual and forecast both zero")
        return float((2.0 * np.abs(e) / denom).mean() * 100.0)
    if kind == "mase":
        if insample is None or m is None:
            raise MissingInsample("MASE needs insample= and season length m=")
        ins = insample.values[:, :, 0]
        if len(ins) <= m:
            raise MissingInsample(f"insample shorter than season length {m}")
        scale = float(np.abs(ins[m:] - ins[:-m]).mean())
        if scale == 0.0:
            raise ZeroDenominator("MASE undefined: seasonal-naive error is zero")
        return float(np.abs(e).mean() / scale)
    # pinball
    return float((q * np.clip(e, 0, None) + (1 - q) * np.clip(-e, 0, None)).mean())


@dataclass(frozen=True)
class BacktestPlan:
    """Expanding-origin evaluation plan.

    ``start`` resolves like any series slice point (fraction, time value, or
    offset); origins run start, start+stride, ... while origin+horizon <= T.
    ``retrain=False`` fits once on the data before the first origin.
    """

    start: object
    horizon: int
    stride: int = 1
    retrain: bool = True

    def __post_init__(self):
        if self.horizon < 1:
            raise InvalidConfig(f"horizon must be >= 1, got {self.horizon}")
        if self.stride < 1:
            raise InvalidConfig(f"stride must be >= 1, got {self.stride}")

    def origins(self, series: TimeSeries) -> list[int]:
        T = len(series)
        p0 = resolve_point(series.index, self.start)
        if p0 < 1:
            raise PlanInfeasible("start leaves no training data")
        if p0 + self.horizon > T:
            raise PlanInfeasible(
                f"no room for one {self.horizon}-step window from origin {p0} "
                f"in {T} points"
            )
        return list(range(p0, T - self.horizon + 1, self.stride))


def historical_forecasts(
    model_factory,
    series: TimeSeries,
    plan: BacktestPlan,
) -> list[TimeSeries]:
    """Forecast at every plan origin; fresh fit per origin when retrain=True.

    With retrain=False one model is fitted on the data before the first
    origin and asked for longer horizons at later origins, keeping only the
    final ``horizon`` steps of each.
    """
    origins = plan.origins(series)
    forecasts = []
    if plan.retrain:
        for p in origins:
            train = series.slice_positions(0, p)
            try:
                fc = model_factory().fit(train).predict(plan.horizon)
            except Exception as err:  # noqa: BLE001 - annotated with the origin
                raise BacktestModelError(p, err) from err
            forecasts.append(fc)
    else:
        p0 = origins[0]
        try:
            model = model_factory().fit(series.slice_positions(0, p0))
            for p in origins:
                fc = model.predict(p - p0 + plan.horizon)
                forecasts.append(fc.slice_positions(p - p0, p - p0 + plan.horizon))
        except BacktestModelError:
            raise
        except Exception as err:  # noqa: BLE001
            raise BacktestModelError(origins[len(forecasts)], err) from err
    return forecasts


def backtest(
    model_factory,
    series: TimeSeries,
    plan: BacktestPlan,
    kind: str = "mae",
    reduction: str = "mean",
    m: int | None = None,
    q: float = 0.5,
) -> float:
    """Per-window metric over the plan's origins, reduced to one number."""
    if reduction not in ("mean", "median"):
        raise InvalidConfig(f"reduction must be mean or median, got {reduction!r}")
    origins = plan.origins(series)
    forecasts = historical_forecasts(model_factory, series, plan)
    scores = []
    for p, fc in zip(origins, forecasts):
        actual = series.slice_positions(p, p + plan.horizon)
        scores.append(
            metric(kind, actual, fc,
                   insample=series.slice_positions(0, p), m=m, q=q)
        )
    return float(np.mean(scores) if reduction == "mean" else np.median(scores))


def grid_search(
    model_factory,
    grid: dict[str, list],
    series: TimeSeries,
    plan: BacktestPlan,
    kind: str = "mae",
    reduction: str = "mean",
    m: int | None = None,
    q: float = 0.5,
) -> tuple[dict, float]:
    """Backtest every combination of the grid; ties keep the earliest.

    ``model_factory`` is called with one keyword per grid key.  Returns the
    minimizing (parameters, score); if every combination fails, the raised
    error lists each combination with its cause.
    """
    if not grid or any(len(v) == 0 for v in grid.values()):
        raise EmptyGrid(f"grid must list at least one value per parameter: {grid}")
    names = list(grid)
    combos = [dict(zip(names, vals)) for vals in itertools.product(*grid.values())]
    best_params, best_score = None, np.inf
    failures = []
    for params in combos:
        try:
            score = backtest(
                lambda: model_factory(**params), series, plan, kind,
                reduction=reduction, m=m, q=q,
            )
        except Exception as err:  # noqa: BLE001 - collected per combination
            failures.append((params, err))
            continue
        if score < best_score:
            best_params, best_score = params, score
    if best_params is None:
        raise GridSearchFailed(failures)
    return best_params, float(best_score)
