"""Slice target/covariate series into supervised samples and inference blocks.

Alignment between target and covariate rows is always done through the time
axes (start + step arithmetic), never by array offset, so covariate series may
start or end anywhere relative to their target as long as they cover the
windows actually requested.  Missing coverage is a hard error — silently
dropping samples would hide data bugs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import (
    CovariateCoverageError,
    InvalidConfig,
    LengthMismatch,
    NaNInput,
    SeriesTooShort,
    WindowTooLong,
)
from .timeindex import TimeIndex
from .timeseries import TimeSeries


@dataclass(frozen=True)
class TrainingSample:
    """One supervised window; arrays are read-views into the parent series."""

    past_target: np.ndarray       # (L_in, C_t)
    past_covs: np.ndarray | None  # (L_in, C_p)
    future_covs: np.ndarray | None  # (L_out, C_f)
    future_target: np.ndarray     # (L_out, C_t)
    origin: tuple[int, int]       # (series id, end-of-input position)


@dataclass(frozen=True)
class InferenceWindow:
    """Aligned blocks for one autoregressive prediction of ``rounds`` chunks."""

    past_target: np.ndarray                  # (L_in, C_t)
    past_cov_blocks: list[np.ndarray] | None   # rounds × (L_in, C_p)
    future_cov_blocks: list[np.ndarray] | None  # rounds × (L_out, C_f)
    rounds: int


def _grid_offset(
    cov_index: TimeIndex, target_index: TimeIndex, side: str, series_id: int
) -> int:
    """Signed position shift mapping target positions onto covariate positions."""
    if cov_index.step != target_index.step:
        raise CovariateCoverageError(
            f"{side} covariates for series {series_id}: step {cov_index.step} "
            f"does not match the target step {target_index.step}"
        )
    delta = cov_index.offset_to(target_index.start)
    if delta is None:
        raise CovariateCoverageError(
            f"{side} covariates for series {series_id}: start {cov_index.start} "
            f"is not on the target's time grid"
        )
    return delta


def _check_cover(
    cov: TimeSeries,
    delta: int,
    lo: int,
    hi: int,
    target_index: TimeIndex,
    side: str,
    series_id: int,
    what: str,
) -> None:
    """Require covariate rows for target positions [lo, hi)."""
    n_cov = len(cov)
    if lo + delta < 0:
        missing = -(lo + delta)
        raise CovariateCoverageError(
            f"{side} covariates for series {series_id} start at {cov.start} but "
            f"{what} needs rows from {target_index.at(lo)} "
            f"({missing} rows missing at the start)"
        )
    if hi + delta > n_cov:
        missing = hi + delta - n_cov
        raise CovariateCoverageError(
            f"{side} covariates for series {series_id} end at {cov.end} but "
            f"{what} needs rows through {target_index.at(hi - 1)} "
            f"({missing} of {hi - lo} rows missing)"
        )


def _window_view(series: TimeSeries, delta: int, lo: int, hi: int) -> np.ndarray:
    return series.values[lo + delta : hi + delta, :, 0]


def _check_nan(block: np.ndarray, what: str) -> None:
    if np.isnan(block).any():
        raise NaNInput(f"NaN inside {what}")


class SampleSequence:
    """Lazy random-access container of TrainingSamples.

    Construction validates every window (coverage and NaN); access after that
    is pure slicing, so repeated reads return identical views in O(window)
    time and O(1) extra memory.
    """

    def __init__(
        self,
        targets: list[TimeSeries],
        past_covs: list[TimeSeries] | None,
        future_covs: list[TimeSeries] | None,
        L_in: int,
        L_out: int,
        origins: list[tuple[int, int]],
        past_deltas: list[int] | None,
        future_deltas: list[int] | None,
    ) -> None:
        self._targets = targets
        self._past = past_covs
        self._future = future_covs
        self._L_in = L_in
        self._L_out = L_out
        self._origins = origins
        self._past_deltas = past_deltas
        self._future_deltas = future_deltas

    def __len__(self) -> int:
        return len(self._origins)

    def __getitem__(self, i: int) -> TrainingSample:
        if not -len(self) <= i < len(self):
            raise IndexError(f"sample index {i} out of range [0, {len(self)})")
        sid, p = self._origins[i]
        target = self._targets[sid]
        past_target = target.values[p - self._L_in : p, :, 0]
        future_target = target.values[p : p + self._L_out, :, 0]
        past = None
        if self._past is not None:
            past = _window_view(
                self._past[sid], self._past_deltas[sid], p - self._L_in, p
            )
        future = None
        if self._future is not None:
            future = _window_view(
                self._future[sid], self._future_deltas[sid], p, p + self._L_out
            )
        return TrainingSample(past_target, past, future, future_target, (sid, p))


def _as_list(x, name: str, n_targets: int):
    if x is None:
        return None
    xs = list(x)
    if len(xs) != n_targets:
        raise LengthMismatch(
            f"{len(xs)} {name} series for {n_targets} target series"
        )
    return xs


def build_samples(
    targets: list[TimeSeries],
    past_covs: list[TimeSeries] | None = None,
    future_covs: list[TimeSeries] | None = None,
    *,
    L_in: int,
    L_out: int,
    stride: int = 1,
    max_per_series: int | None = None,
) -> SampleSequence:
    """Enumerate supervised windows over one or many target series.

    Forecast origins are every stride-th position p with L_in <= p <= T - L_out,
    most recent first; ``max_per_series`` keeps the newest windows.  Samples
    from series i precede samples from series i+1.
    """
    if L_in < 1 or L_out < 1 or stride < 1:
        raise InvalidConfig("L_in, L_out and stride must be positive")
    if max_per_series is not None and max_per_series < 1:
        raise InvalidConfig("max_per_series must be positive when given")
    targets = list(targets)
    past_covs = _as_list(past_covs, "past-covariate", len(targets))
    future_covs = _as_list(future_covs, "future-covariate", len(targets))

    for sid, series in enumerate(targets):
        if not series.is_deterministic:
            raise InvalidConfig(
                f"target series {sid} is stochastic; training needs one sample"
            )
    for name, covs in (("past-covariate", past_covs), ("future-covariate", future_covs)):
        for sid, series in enumerate(covs or []):
            if not series.is_deterministic:
                raise InvalidConfig(f"{name} series {sid} is stochastic")

    past_deltas = None
    if past_covs is not None:
        past_deltas = [
            _grid_offset(c.index, t.index, "past", sid)
            for sid, (c, t) in enumerate(zip(past_covs, targets))
        ]
    future_deltas = None
    if future_covs is not None:
        future_deltas = [
            _grid_offset(c.index, t.index, "future", sid)
            for sid, (c, t) in enumerate(zip(future_covs, targets))
        ]

    origins: list[tuple[int, int]] = []
    for sid, target in enumerate(targets):
        T = len(target)
        if T < L_in + L_out:
            raise WindowTooLong(
                f"series {sid} has {T} points, below one window of "
                f"{L_in} + {L_out}"
            )
        series_origins = list(range(T - L_out, L_in - 1, -stride))
        if max_per_series is not None:
            series_origins = series_origins[:max_per_series]
        for p in series_origins:
            what = f"the window at origin {target.index[p]}"
            _check_nan(
                target.values[p - L_in : p + L_out, :, 0],
                f"target series {sid}, {what}",
            )
            if past_covs is not None:
                _check_cover(
                    past_covs[sid], past_deltas[sid], p - L_in, p,
                    target.index, "past", sid, what,
                )
                _check_nan(
                    _window_view(past_covs[sid], past_deltas[sid], p - L_in, p),
                    f"past covariates of series {sid}, {what}",
                )
            if future_covs is not None:
                _check_cover(
                    future_covs[sid], future_deltas[sid], p, p + L_out,
                    target.index, "future", sid, what,
                )
                _check_nan(
                    _window_view(future_covs[sid], future_deltas[sid], p, p + L_out),
                    f"future covariates of series {sid}, {what}",
                )
        origins.extend((sid, p) for p in series_origins)

    return SampleSequence(
        targets, past_covs, future_covs, L_in, L_out,
        origins, past_deltas, future_deltas,
    )


def extract_inference_window(
    target: TimeSeries,
    past_covs: TimeSeries | None = None,
    future_covs: TimeSeries | None = None,
    *,
    L_in: int,
    n: int,
    L_out: int,
) -> InferenceWindow:
    """Gather the blocks an autoregressive chunked forecast of n steps needs.

    The forecast proceeds in ceil(n / L_out) rounds of L_out steps.  Round j
    starts at origin T + j*L_out, so future covariates must cover rounds*L_out
    steps beyond the target's end, and past covariates (rounds-1)*L_out steps
    beyond it.
    """
    if n < 1:
        raise InvalidConfig("forecast horizon n must be >= 1")
    T = len(target)
    if T < L_in:
        raise SeriesTooShort(f"need at least {L_in} points, got {T}")
    rounds = math.ceil(n / L_out)

    past_target = target.values[T - L_in : T, :, 0]
    _check_nan(past_target, "the target's input window")

    past_blocks = None
    if past_covs is not None:
        delta = _grid_offset(past_covs.index, target.index, "past", 0)
        # union of all round windows, so the error names the full shortfall
        _check_cover(
            past_covs, delta, T - L_in, T + (rounds - 1) * L_out,
            target.index, "past", 0, f"an autoregressive forecast of {n} steps",
        )
        past_blocks = []
        for j in range(rounds):
            lo = T + j * L_out - L_in
            hi = T + j * L_out
            block = _window_view(past_covs, delta, lo, hi)
            _check_nan(block, f"past covariates, round {j + 1} of {rounds}")
            past_blocks.append(block)

    future_blocks = None
    if future_covs is not None:
        delta = _grid_offset(future_covs.index, target.index, "future", 0)
        _check_cover(
            future_covs, delta, T, T + rounds * L_out,
            target.index, "future", 0, f"an autoregressive forecast of {n} steps",
        )
        future_blocks = []
        for j in range(rounds):
            lo = T + j * L_out
            hi = T + (j + 1) * L_out
            block = _window_view(future_covs, delta, lo, hi)
            _check_nan(block, f"future covariates, round {j + 1} of {rounds}")
            future_blocks.append(block)

    return InferenceWindow(past_target, past_blocks, future_blocks, rounds)
