"""Forecasting models behind one fit/predict contract."""

from .arima import ARIMA
from .base import ForecastingModel
from .exponential_smoothing import ExponentialSmoothing
from .fft import FFTForecaster
from .naive import NaiveDrift, NaiveSeasonal
from .regression import LaggedRegression
from .theta import Theta

__all__ = [
    "ARIMA",
    "ExponentialSmoothing",
    "FFTForecaster",
    "ForecastingModel",
    "LaggedRegression",
    "NaiveDrift",
    "NaiveSeasonal",
    "Theta",
]
