"""Uniform time axes generated from (start, step, length).

Axes are never stored as explicit point lists: every point is
``start + i * step``, which makes uniform spacing and strict ordering
true by construction. Two axis families exist:

* integer range axes: ``start`` is an int, ``step`` a positive int stride;
* datetime axes: ``start`` is a ``datetime.date`` or ``datetime.datetime``
  and ``step`` a :class:`TimeStep` (calendar months, or a fixed duration).
"""

from __future__ import annotations

import datetime as dt
from dataclasses import dataclass

from .exceptions import EmptySeries, OutOfRange

_DAYS_IN_MONTH = (31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31)


def _days_in_month(year: int, month: int) -> int:
    if month == 2 and (year % 4 == 0 and (year % 100 != 0 or year % 400 == 0)):
        return 29
    return _DAYS_IN_MONTH[month - 1]


def add_months(t: dt.date, k: int) -> dt.date:
    """Advance by k calendar months, clipping the day to the month's end."""
    months = (t.year * 12 + t.month - 1) + k
    year, month = divmod(months, 12)
    month += 1
    day = min(t.day, _days_in_month(year, month))
    return t.replace(year=year, month=month, day=day)


@dataclass(frozen=True)
class TimeStep:
    """Step between consecutive points: calendar months XOR a fixed duration."""

    months: int = 0
    delta: dt.timedelta = dt.timedelta(0)

    def __post_init__(self):
        has_months = self.months > 0
        has_delta = self.delta > dt.timedelta(0)
        if has_months == has_delta:
            raise ValueError("TimeStep needs months > 0 xor a positive duration")
        if self.months < 0:
            raise ValueError("months must be non-negative")

    @staticmethod
    def monthly(k: int = 1) -> "TimeStep":
        return TimeStep(months=k)

    @staticmethod
    def daily(k: int = 1) -> "TimeStep":
        return TimeStep(delta=dt.timedelta(days=k))

    def advance(self, t: dt.date, k: int):
        if self.months:
            return add_months(t, k * self.months)
        return t + k * self.delta

    def count_between(self, start, t) -> int | None:
        """Number of whole steps from start to t, or None if t is off-grid."""
        if self.months:
            k, rem = divmod((t.year - start.year) * 12 + t.month - start.month,
                            self.months)
            if rem:
                return None
            # regeneration check handles day-of-month clipping
            return k if self.advance(start, k) == t else None
        span = t - start
        k, rem = divmod(span, self.delta)
        if rem:
            return None
        return int(k)

    def __str__(self):
        if self.months:
            return f"{self.months}mo"
        return str(self.delta)


MONTHLY = TimeStep.monthly(1)
DAILY = TimeStep.daily(1)


@dataclass(frozen=True)
class TimeIndex:
    """Immutable uniform axis of `length` points start, start+step, ..."""

    start: object
    step: object
    length: int

    def __post_init__(self):
        if self.length < 1:
            raise EmptySeries("time index needs at least one point")
        if self.is_integer:
            if not isinstance(self.step, int) or self.step <= 0:
                raise ValueError("integer axis needs a positive int stride")
        elif isinstance(self.start, (dt.date, dt.datetime)):
            if not isinstance(self.step, TimeStep):
                raise ValueError("datetime axis needs a TimeStep step")
        else:
            raise ValueError(f"unsupported start type {type(self.start)!r}")

    @staticmethod
    def range(length: int, start: int = 0, step: int = 1) -> "TimeIndex":
        return TimeIndex(start=start, step=step, length=length)

    @staticmethod
    def datetime(start, step: TimeStep, length: int) -> "TimeIndex":
        return TimeIndex(start=start, step=step, length=length)

    @property
    def is_integer(self) -> bool:
        return isinstance(self.start, int) and not isinstance(self.start, bool)

    def __len__(self) -> int:
        return self.length

    def __getitem__(self, i: int):
        if not 0 <= i < self.length:
            raise OutOfRange(f"position {i} outside index of length {self.length}")
        return self.at(i)

    def at(self, i: int):
        """Time the grid would have at position i; i may lie outside the axis."""
        if self.is_integer:
            return self.start + i * self.step
        return self.step.advance(self.start, i)

    def offset_to(self, t) -> int | None:
        """Signed whole steps from self.start to t; None if t is off the grid."""
        if self.is_integer:
            if not isinstance(t, int):
                return None
            k, rem = divmod(t - self.start, self.step)
            return None if rem else k
        return self.step.count_between(self.start, t)

    @property
    def end(self):
        return self[self.length - 1]

    def points(self) -> list:
        return [self[i] for i in range(self.length)]

    def position_of(self, t) -> int:
        """Position of time point t, or OutOfRange if t is not on the axis."""
        if self.is_integer:
            if isinstance(t, bool) or not isinstance(t, int):
                raise OutOfRange(f"integer axis cannot locate {t!r}")
            k, rem = divmod(t - self.start, self.step)
            if rem:
                raise OutOfRange(f"time {t} is not on the stride-{self.step} grid")
        else:
            if not isinstance(t, (dt.date, dt.datetime)):
                raise OutOfRange(f"datetime axis cannot locate {t!r}")
            k = self.step.count_between(self.start, t)
            if k is None:
                raise OutOfRange(f"time {t} is not on the {self.step} grid")
        if not 0 <= k < self.length:
            raise OutOfRange(f"time {t} lies outside the index span")
        return int(k)

    def contains(self, t) -> bool:
        try:
            self.position_of(t)
            return True
        except OutOfRange:
            return False

    def slice_positions(self, i: int, j: int) -> "TimeIndex":
        """Sub-axis covering positions [i, j) of this axis."""
        if not (0 <= i < j <= self.length):
            raise OutOfRange(f"positions [{i}, {j}) invalid for length {self.length}")
        return TimeIndex(start=self[i], step=self.step, length=j - i)

    def after(self, n: int) -> "TimeIndex":
        """Axis of n points continuing immediately after this one."""
        if self.is_integer:
            start = self.end + self.step
        else:
            start = self.step.advance(self.end, 1)
        return TimeIndex(start=start, step=self.step, length=n)

    def continues(self, other: "TimeIndex") -> bool:
        """True if self starts exactly one step after other ends, same step."""
        if self.step != other.step:
            return False
        return self.start == other.after(1).start


def resolve_point(index: TimeIndex, point) -> int:
    """Resolve a slice point to an index position.

    Accepted forms:

    * a time value on the axis (int for integer axes, date/datetime for
      datetime axes);
    * a float strictly inside (0, 1): fractional position, mapped to
      ``clip(floor(f * T) - 1, 0, T - 2)``;
    * for datetime axes only, an int is a 0-based positional offset
      (negative counts from the end).
    """
    T = index.length
    if isinstance(point, bool):
        raise OutOfRange("boolean is not a slice point")
    if isinstance(point, float):
        if not 0.0 < point < 1.0:
            raise OutOfRange(f"fractional slice point {point} outside (0, 1)")
        pos = int(point * T) - 1
        return min(max(pos, 0), T - 2) if T >= 2 else 0
    if isinstance(point, (dt.date, dt.datetime)):
        return index.position_of(point)
    if isinstance(point, int):
        if index.is_integer:
            return index.position_of(point)
        pos = point + T if point < 0 else point
        if not 0 <= pos < T:
            raise OutOfRange(f"offset {point} outside index of length {T}")
        return pos
    raise OutOfRange(f"cannot interpret {point!r} as a slice point")
