"""Long-format CSV import/export.

Deterministic series use the header ``time,component,value``; stochastic
series add a ``sample`` column: ``time,component,sample,value``. Times are
ISO-8601 dates (``YYYY-MM-DD``) or bare integers. Round-trips are lossless
for finite values; NaN cells are skipped on export and re-created as NaN
on import.
"""

from __future__ import annotations

import csv
import datetime as dt
import io as _io
from pathlib import Path

import numpy as np

from .exceptions import DuplicateCell, EmptySeries, NonUniformTimeGrid
from .timeseries import TimeSeries, _grid_from_times

__all__ = ["read_csv", "write_csv", "dumps_csv", "loads_csv"]

_DET_HEADER = ["time", "component", "value"]
_STOCH_HEADER = ["time", "component", "sample", "value"]


def _parse_time(text: str):
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return dt.date.fromisoformat(text)
    except ValueError:
        raise NonUniformTimeGrid(
            f"cannot parse time {text!r}: expected integer or YYYY-MM-DD"
        ) from None


def _format_time(t) -> str:
    if isinstance(t, (dt.date, dt.datetime)):
        return t.strftime("%Y-%m-%d")
    return str(t)


def loads_csv(text: str, step=None) -> TimeSeries:
    reader = csv.reader(_io.StringIO(text))
    header = next(reader, None)
    if header == _DET_HEADER:
        stochastic = False
    elif header == _STOCH_HEADER:
        stochastic = True
    else:
        raise NonUniformTimeGrid(
            f"unrecognized CSV header {header!r}; expected "
            f"{','.join(_DET_HEADER)} or {','.join(_STOCH_HEADER)}"
        )
    cells = {}
    components: list[str] = []
    times: set = set()
    max_sample = 0
    for row in reader:
        if not row:
            continue
        if stochastic:
            t_raw, comp, sample_raw, val_raw = row
            sample = int(sample_raw)
        else:
            t_raw, comp, val_raw = row
            sample = 0
        t = _parse_time(t_raw)
        key = (t, comp, sample)
        if key in cells:
            raise DuplicateCell(f"duplicate cell for time {t}, component {comp!r}")
        cells[key] = float(val_raw)
        times.add(t)
        max_sample = max(max_sample, sample)
        if comp not in components:
            components.append(comp)
    if not cells:
        raise EmptySeries("CSV contains no data rows")
    index = _grid_from_times(sorted(times), step)
    values = np.full((index.length, len(components), max_sample + 1), np.nan)
    comp_pos = {c: j for j, c in enumerate(components)}
    for (t, comp, sample), v in cells.items():
        values[index.position_of(t), comp_pos[comp], sample] = v
    return TimeSeries(index, values, components)


def dumps_csv(series: TimeSeries) -> str:
    buf = _io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    stochastic = not series.is_deterministic
    writer.writerow(_STOCH_HEADER if stochastic else _DET_HEADER)
    values = series.values
    for i, t in enumerate(series.times()):
        t_text = _format_time(t)
        for j, comp in enumerate(series.components):
            for s in range(series.n_samples):
                v = values[i, j, s]
                if np.isnan(v):
                    continue
                if stochastic:
                    writer.writerow([t_text, comp, s, repr(float(v))])
                else:
                    writer.writerow([t_text, comp, repr(float(v))])
    return buf.getvalue()


def read_csv(path, step=None) -> TimeSeries:
    return loads_csv(Path(path).read_text(), step=step)


def write_csv(series: TimeSeries, path) -> None:
    Path(path).write_text(dumps_csv(series))
