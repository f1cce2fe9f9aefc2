"""ARIMA(p, d, q) estimated by conditional sum of squares."""

from __future__ import annotations

import warnings

import numpy as np
from scipy.linalg import solve_toeplitz

from .._kernels import arma_residuals
from ..exceptions import DataWarning, InvalidConfig
from ..timeseries import TimeSeries
from ._optim import nelder_mead
from .base import ForecastingModel


def _yule_walker(z: np.ndarray, p: int) -> np.ndarray:
    """AR(p) start values from the sample autocovariances."""
    N = len(z)
    c = np.array([float(z[k:] @ z[: N - k]) / N for k in range(p + 1)])
    if c[0] <= 0.0:
        return np.zeros(p)
    try:
        return solve_toeplitz(c[:p], c[1 : p + 1])
    except np.linalg.LinAlgError:
        return np.zeros(p)


class ARIMA(ForecastingModel):
    """Difference d times, fit AR(p)+MA(q) on the centered result by CSS.

    Residuals are computed recursively with zero pre-sample residuals and the
    first p observations as burn-in.  Pure AR is solved directly by least
    squares; otherwise Nelder-Mead starts from (Yule-Walker AR, zero MA) and
    falls back to an all-zero start (with a warning) if that run diverges.
    """

    def __init__(self, p: int = 1, d: int = 0, q: int = 0) -> None:
        super().__init__()
        for name, v in (("p", p), ("d", d), ("q", q)):
            if not isinstance(v, (int, np.integer)) or v < 0:
                raise InvalidConfig(f"{name} must be a non-negative int, got {v!r}")
        if p + q == 0 and d == 0:
            raise InvalidConfig("order (0, 0, 0) fits nothing; need p+q >= 1 or d >= 1")
        self.p, self.d, self.q = int(p), int(d), int(q)
        self.min_train_length = self.p + self.d + self.q + 2
        self.css_: float | None = None
        self.css_init_: float | None = None

    def fit(self, series: TimeSeries) -> "ARIMA":
        y = self._check_univariate_input(series)
        p, d, q = self.p, self.d, self.q

        w = y.copy()
        tails = []
        for _ in range(d):
            tails.append(float(w[-1]))
            w = np.diff(w)
        self._tails = tails

        if p + q == 0:
            self._mu = 0.0
            self.ar_ = np.zeros(0)
            self.ma_ = np.zeros(0)
            self._z = np.zeros(0)
            self._resid = np.zeros(0)
            self.css_ = self.css_init_ = 0.0
        else:
            self._mu = float(w.mean())
            z = w - self._mu
            resid = np.empty(len(z))

            if q == 0:
                rows = np.column_stack([z[p - 1 - i : len(z) - 1 - i] for i in range(p)])
                ar, *_ = np.linalg.lstsq(rows, z[p:], rcond=None)
                self.ar_ = np.asarray(ar, dtype=float)
                self.ma_ = np.zeros(0)
                self.css_init_ = float(
                    arma_residuals(z, _yule_walker(z, p), self.ma_, resid)
                )
                self.css_ = float(arma_residuals(z, self.ar_, self.ma_, resid))
            else:
                def css_of(x: np.ndarray) -> float:
                    value = arma_residuals(z, x[:p], x[p:], resid)
                    return value if np.isfinite(value) else np.inf

                x0 = np.concatenate([_yule_walker(z, p), np.zeros(q)])
                self.css_init_ = float(css_of(x0))
                best, css = nelder_mead(css_of, x0)
                if not np.isfinite(css):
                    warnings.warn(
                        "CSS optimization diverged from the Yule-Walker start; "
                        "restarting from zero",
                        DataWarning,
                        stacklevel=2,
                    )
                    best, css = nelder_mead(css_of, np.zeros(p + q))
                self.ar_ = best[:p].copy()
                self.ma_ = best[p:].copy()
                self.css_ = float(arma_residuals(z, self.ar_, self.ma_, resid))

            self._z = z
            self._resid = resid

        self._remember(series)
        self._fitted = True
        return self

    def predict(self, n: int) -> TimeSeries:
        self._require_fitted()
        self._check_horizon(n)
        p, q = self.p, self.q
        z = list(self._z)
        e = list(self._resid)
        tails = list(self._tails)  # integration state local to this call
        out = np.empty(n)
        for h in range(n):
            zt = 0.0
            for i in range(p):
                zt += self.ar_[i] * z[-1 - i]
            for j in range(q):
                if len(e) - 1 - j >= 0:
                    zt += self.ma_[j] * e[-1 - j]
            z.append(zt)
            e.append(0.0)
            v = zt + self._mu if p + q > 0 else 0.0
            # undo the d differencing levels from the innermost out
            for level in range(self.d - 1, -1, -1):
                v = tails[level] + v
                tails[level] = v
            out[h] = v
        return self._wrap_forecast(out, n)
