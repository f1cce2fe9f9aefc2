import datetime as dt

import numpy as np
import pytest

from tscast import MONTHLY, TimeIndex, TimeSeries


def rseries(values, start=0, step=1, components=None):
    """Range-indexed series from a (T,), (T,C) or (T,C,S) array."""
    arr = np.asarray(values, dtype=float)
    if arr.ndim == 1:
        arr = arr[:, None, None]
    elif arr.ndim == 2:
        arr = arr[:, :, None]
    return TimeSeries(TimeIndex.range(arr.shape[0], start, step), arr, components)


def mseries(values, start=dt.date(2000, 1, 1), components=None):
    """Monthly series from a (T,), (T,C) or (T,C,S) array."""
    arr = np.asarray(values, dtype=float)
    if arr.ndim == 1:
        arr = arr[:, None, None]
    elif arr.ndim == 2:
        arr = arr[:, :, None]
    return TimeSeries(TimeIndex.datetime(start, MONTHLY, arr.shape[0]), arr, components)


@pytest.fixture
def rng():
    return np.random.default_rng(0)
