"""tscast: a small time-series forecasting toolkit.

Immutable (time, component, sample) series, classical and global forecasting
models behind one fit/predict contract, probabilistic sampling, filtering,
backtesting, and a config-driven CLI.
"""

from .datasets import load as load_dataset
from .ensembles import Ensemble
from .evaluation import (
    BacktestPlan,
    backtest,
    grid_search,
    historical_forecasts,
    metric,
)
from .filters import KalmanSpec, kalman_filter, local_level_fit, moving_average_filter
from .io import dumps_csv, loads_csv, read_csv, write_csv
from .likelihoods import fit_residuals, likelihood_kinds
from .models import (
    ARIMA,
    ExponentialSmoothing,
    FFTForecaster,
    ForecastingModel,
    LaggedRegression,
    NaiveDrift,
    NaiveSeasonal,
    Theta,
)
from .timeindex import DAILY, MONTHLY, TimeIndex, TimeStep
from .timeseries import TimeSeries
from .transforms import (
    BoxCox,
    MinMaxScaler,
    MissingFiller,
    Pipeline,
    StandardScaler,
)

__version__ = "0.1.0"

__all__ = [
    "ARIMA",
    "BacktestPlan",
    "BoxCox",
    "DAILY",
    "Ensemble",
    "ExponentialSmoothing",
    "FFTForecaster",
    "ForecastingModel",
    "KalmanSpec",
    "LaggedRegression",
    "MinMaxScaler",
    "MissingFiller",
    "MONTHLY",
    "NaiveDrift",
    "NaiveSeasonal",
    "Pipeline",
    "StandardScaler",
    "Theta",
    "TimeIndex",
    "TimeSeries",
    "TimeStep",
    "backtest",
    "dumps_csv",
    "fit_residuals",
    "grid_search",
    "historical_forecasts",
    "kalman_filter",
    "likelihood_kinds",
    "load_dataset",
    "loads_csv",
    "local_level_fit",
    "metric",
    "moving_average_filter",
    "read_csv",
    "write_csv",
    "__version__",
]
