"""Immutable (time, component, sample) series container and its operations.

Values live in a read-only float64 tensor of shape (T, C, S). Every
operation returns a new series; slicing shares memory through read-only
NumPy views. A series with S == 1 is deterministic, S > 1 stochastic.
NaN cells are legal in storage and mark missing values.
"""

from __future__ import annotations

import warnings
from typing import Callable, Iterable, Sequence

import numpy as np

from .exceptions import (
    BroadcastError,
    DataWarning,
    DeterministicInput,
    DuplicateCell,
    DuplicateComponentName,
    EmptySeries,
    IndexMismatch,
    NonContiguousAppend,
    NonUniformTimeGrid,
    OutOfRange,
    QuantileOutOfRange,
    SeriesTooShort,
    ShapeMismatch,
)
from .timeindex import TimeIndex, TimeStep, resolve_point

__all__ = ["TimeSeries"]


def _default_names(c: int) -> tuple[str, ...]:
    return tuple(f"c{i}" for i in range(c))


class TimeSeries:
    """One time series: a TimeIndex plus a (T, C, S) value tensor."""

    __slots__ = ("_index", "_values", "_components")

    def __init__(self, index: TimeIndex, values, components: Sequence[str] | None = None):
        values = np.asarray(values, dtype=np.float64)
        if values.ndim == 1:
            values = values[:, None, None]
        elif values.ndim == 2:
            values = values[:, :, None]
        elif values.ndim != 3:
            raise ShapeMismatch(f"values must be 1-3 dimensional, got {values.ndim}")
        if values.size == 0:
            raise EmptySeries("series needs at least one time point and component")
        if values.shape[0] != index.length:
            raise ShapeMismatch(
                f"values have {values.shape[0]} rows but index length is {index.length}"
            )
        names = _default_names(values.shape[1]) if components is None else tuple(components)
        if len(names) != values.shape[1]:
            raise ShapeMismatch(
                f"{len(names)} component names for {values.shape[1]} components"
            )
        if len(set(names)) != len(names):
            raise DuplicateComponentName(f"component names not unique: {names}")
        if values.flags.writeable:
            values = values.copy()
            values.flags.writeable = False
        self._index = index
        self._values = values
        self._components = names

    # --- basic accessors ---------------------------------------------------

    @property
    def index(self) -> TimeIndex:
        return self._index

    @property
    def values(self) -> np.ndarray:
        """Read-only (T, C, S) view of the data."""
        return self._values

    @property
    def components(self) -> tuple[str, ...]:
        return self._components

    def __len__(self) -> int:
        return self._index.length

    @property
    def n_components(self) -> int:
        return self._values.shape[1]

    @property
    def n_samples(self) -> int:
        return self._values.shape[2]

    @property
    def is_deterministic(self) -> bool:
        return self.n_samples == 1

    @property
    def is_univariate(self) -> bool:
        return self.n_components == 1

    @property
    def start(self):
        return self._index[0]

    @property
    def end(self):
        return self._index.end

    def times(self) -> list:
        return self._index.points()

    def univariate_values(self) -> np.ndarray:
        """The (T,) value vector of a univariate deterministic series."""
        if self.n_components != 1 or self.n_samples != 1:
            raise ShapeMismatch(
                f"series has shape {self._values.shape}, expected (T, 1, 1)"
            )
        return self._values[:, 0, 0]

    def has_nan(self) -> bool:
        return bool(np.isnan(self._values).any())

    def __repr__(self) -> str:
        return (
            f"TimeSeries(start={self.start}, step={self._index.step}, "
            f"shape={self._values.shape}, components={list(self._components)})"
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, TimeSeries):
            return NotImplemented
        return (
            self._index == other._index
            and self._components == other._components
            and np.array_equal(self._values, other._values, equal_nan=True)
        )

    def _with_values(self, values: np.ndarray, components=None) -> "TimeSeries":
        return TimeSeries(self._index, values,
                          self._components if components is None else components)

    # --- construction from long-format records -----------------------------

    @staticmethod
    def from_records(records: Iterable[tuple], step=None) -> "TimeSeries":
        """Build a deterministic series from (time, component, value) records.

        Missing grid cells become NaN. The grid step may be given
        explicitly; otherwise it is inferred as the coarsest step
        consistent with all observed times (gcd of the gaps).
        """
        records = list(records)
        if not records:
            raise EmptySeries("no records")
        times = sorted({r[0] for r in records})
        components: list[str] = []
        for r in records:
            if r[1] not in components:
                components.append(r[1])
        index = _grid_from_times(times, step)
        values = np.full((index.length, len(components), 1), np.nan)
        seen = set()
        comp_pos = {c: j for j, c in enumerate(components)}
        for t, c, v in records:
            key = (t, c)
            if key in seen:
                raise DuplicateCell(f"duplicate record for time {t}, component {c!r}")
            seen.add(key)
            values[index.position_of(t), comp_pos[c], 0] = v
        return TimeSeries(index, values, components)

    def to_records(self) -> list[tuple]:
        """Inverse of from_records; NaN cells are omitted."""
        if not self.is_deterministic:
            raise DeterministicInput("records are defined for deterministic series")
        out = []
        for i, t in enumerate(self.times()):
            for j, c in enumerate(self._components):
                v = self._values[i, j, 0]
                if not np.isnan(v):
                    out.append((t, c, float(v)))
        return out

    # --- structural operations ----------------------------------------------

    def slice(self, start, end) -> "TimeSeries":
        """Contiguous sub-series between two slice points, bounds inclusive."""
        i = resolve_point(self._index, start)
        j = resolve_point(self._index, end)
        if i > j:
            raise OutOfRange(f"slice start {start!r} resolves after end {end!r}")
        return TimeSeries(
            self._index.slice_positions(i, j + 1),
            self._values[i : j + 1],
            self._components,
        )

    def slice_positions(self, i: int, j: int) -> "TimeSeries":
        """Sub-series over positions [i, j), half-open."""
        return TimeSeries(
            self._index.slice_positions(i, j), self._values[i:j], self._components
        )

    def head(self, k: int) -> "TimeSeries":
        return self.slice_positions(0, k)

    def split_after(self, point) -> tuple["TimeSeries", "TimeSeries"]:
        """Split into ([0..p], (p..T-1]) where p resolves strictly inside."""
        T = len(self)
        p = resolve_point(self._index, point)
        if not 0 <= p <= T - 2:
            raise OutOfRange(f"split point {point!r} must resolve before the last point")
        return self.slice_positions(0, p + 1), self.slice_positions(p + 1, T)

    def append(self, other: "TimeSeries") -> "TimeSeries":
        """Concatenate along time; other must continue this axis exactly."""
        if other._index.step != self._index.step or not other._index.continues(self._index):
            raise NonContiguousAppend(
                f"appended series starts at {other.start}, expected "
                f"{self._index.after(1).start} with step {self._index.step}"
            )
        if other._components != self._components:
            raise ShapeMismatch("component names differ")
        if other.n_samples != self.n_samples:
            raise BroadcastError(
                f"sample counts differ: {self.n_samples} vs {other.n_samples}"
            )
        index = TimeIndex(self._index.start, self._index.step,
                          len(self) + len(other))
        return TimeSeries(
            index, np.concatenate([self._values, other._values]), self._components
        )

    def stack(self, other: "TimeSeries") -> "TimeSeries":
        """Concatenate along the component axis; time axes must be identical."""
        if self._index != other._index:
            raise IndexMismatch("stacked series must share the same time axis")
        a, b = _broadcast_samples(self._values, other._values)
        names = self._components + other._components
        if len(set(names)) != len(names):
            raise DuplicateComponentName(f"stacking duplicates names: {names}")
        return TimeSeries(self._index, np.concatenate([a, b], axis=1), names)

    # --- pointwise math ------------------------------------------------------

    def map(self, fn: Callable[[np.ndarray], np.ndarray]) -> "TimeSeries":
        """Apply a pointwise function to the values."""
        out = np.asarray(fn(self._values.copy()), dtype=np.float64)
        if out.shape != self._values.shape:
            raise ShapeMismatch("mapped function changed the value shape")
        return self._with_values(out)

    def _zip(self, other, op: str) -> "TimeSeries":
        if isinstance(other, (int, float)):
            b = np.float64(other)
            a = self._values
        elif isinstance(other, TimeSeries):
            if self._index != other._index:
                raise IndexMismatch(f"operands of {op} must share the time axis")
            if self.n_components != other.n_components:
                raise ShapeMismatch(
                    f"component counts differ: {self.n_components} vs {other.n_components}"
                )
            a, b = _broadcast_samples(self._values, other._values)
        else:
            return NotImplemented
        if op == "+":
            out = a + b
        elif op == "-":
            out = a - b
        elif op == "*":
            out = a * b
        else:
            with np.errstate(divide="ignore", invalid="ignore"):
                out = np.asarray(a / b)
            zero = b == 0 if np.ndim(b) else np.full(out.shape, b == 0)
            if zero.any():
                out = out.copy()
                out[np.broadcast_to(zero, out.shape)] = np.nan
                warnings.warn("division by zero produced NaN cells", DataWarning,
                              stacklevel=3)
        return self._with_values(out)

    def __add__(self, other):
        return self._zip(other, "+")

    def __radd__(self, other):
        return self._zip(other, "+")

    def __sub__(self, other):
        return self._zip(other, "-")

    def __mul__(self, other):
        return self._zip(other, "*")

    def __rmul__(self, other):
        return self._zip(other, "*")

    def __truediv__(self, other):
        return self._zip(other, "/")

    # --- statistics -----------------------------------------------------------

    def diff(self, order: int = 1, lag: int = 1) -> "TimeSeries":
        """Repeated lagged differencing; result is order*lag points shorter."""
        if order < 1 or lag < 1:
            raise ValueError("order and lag must be positive")
        T = len(self)
        if T <= order * lag:
            raise SeriesTooShort(
                f"series of length {T} cannot be differenced {order}x at lag {lag}"
            )
        v = self._values
        for _ in range(order):
            v = v[lag:] - v[:-lag]
        return TimeSeries(
            self._index.slice_positions(order * lag, T), v, self._components
        )

    def quantile(self, q: float) -> "TimeSeries":
        """Per-(time, component) empirical quantile of a stochastic series."""
        if not 0.0 <= q <= 1.0:
            raise QuantileOutOfRange(f"quantile {q} outside [0, 1]")
        if self.is_deterministic:
            raise DeterministicInput("quantile needs a stochastic series")
        out = np.quantile(self._values, q, axis=2, keepdims=True)
        return self._with_values(out)

    def median(self) -> "TimeSeries":
        """Sample median; identity for deterministic series."""
        if self.is_deterministic:
            return self
        return self.quantile(0.5)


def _broadcast_samples(a: np.ndarray, b: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    if a.shape[2] == b.shape[2]:
        return a, b
    if a.shape[2] == 1:
        return np.broadcast_to(a, (*a.shape[:2], b.shape[2])), b
    if b.shape[2] == 1:
        return a, np.broadcast_to(b, (*b.shape[:2], a.shape[2]))
    raise BroadcastError(f"sample counts {a.shape[2]} and {b.shape[2]} incompatible")


def _gcd_many(gaps: list[int]) -> int:
    import math

    g = 0
    for d in gaps:
        g = math.gcd(g, d)
    return g


def _grid_from_times(times: list, step) -> TimeIndex:
    """Uniform grid covering the observed times; infers the step if absent."""
    import datetime as dt

    first, last = times[0], times[-1]
    integer = isinstance(first, int) and not isinstance(first, bool)
    if step is None:
        if len(times) == 1:
            step = 1 if integer else TimeStep.monthly()
        elif integer:
            step = _gcd_many([b - a for a, b in zip(times, times[1:])])
        else:
            step = _infer_date_step(times)
    if integer:
        if not isinstance(step, int) or step <= 0:
            raise NonUniformTimeGrid(f"invalid stride {step!r} for integer times")
        length = (last - first) // step + 1
    else:
        if not isinstance(step, TimeStep):
            raise NonUniformTimeGrid(f"invalid step {step!r} for datetime times")
        k = step.count_between(first, last)
        if k is None:
            raise NonUniformTimeGrid(f"times {first}..{last} not on a {step} grid")
        length = k + 1
    index = TimeIndex(first, step, length)
    for t in times:
        if not index.contains(t):
            raise NonUniformTimeGrid(f"time {t} is not on the inferred {step} grid")
    return index


def _infer_date_step(times: list) -> TimeStep:
    import datetime as dt

    same_day = len({t.day for t in times}) == 1
    if same_day:
        month_gaps = [
            (b.year - a.year) * 12 + (b.month - a.month)
            for a, b in zip(times, times[1:])
        ]
        if all(g > 0 for g in month_gaps):
            return TimeStep.monthly(_gcd_many(month_gaps))
    day_gaps = [(b - a).days for a, b in zip(times, times[1:])]
    if any(g <= 0 for g in day_gaps) or any(
        (b - a) != dt.timedelta(days=(b - a).days) for a, b in zip(times, times[1:])
    ):
        raise NonUniformTimeGrid("cannot infer a uniform step from the times")
    return TimeStep.daily(_gcd_many(day_gaps))
