"""Filtering: Kalman recursion, a self-tuning local-level model, moving average."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._kernels import local_level_loglik
from .exceptions import (
    BadWindow,
    DimensionMismatch,
    InvalidConfig,
    NaNInput,
    NonInvertibleInnovation,
    SeriesTooShort,
)
from .models._optim import nelder_mead
from .timeseries import TimeSeries


@dataclass(frozen=True)
class KalmanSpec:
    """Linear-Gaussian state space: x' = F x + w, y = H x + v."""

    F: np.ndarray
    H: np.ndarray
    Q: np.ndarray
    R: np.ndarray
    m0: np.ndarray
    P0: np.ndarray

    def __post_init__(self):
        for name in ("F", "H", "Q", "R", "m0", "P0"):
            object.__setattr__(
                self, name, np.atleast_1d(np.asarray(getattr(self, name), dtype=float))
            )
        for name in ("F", "H", "Q", "R", "P0"):
            mat = getattr(self, name)
            object.__setattr__(self, name, np.atleast_2d(mat))
        k = self.F.shape[0]
        c = self.H.shape[0]
        checks = {
            "F": (self.F.shape, (k, k)),
            "H": (self.H.shape, (c, k)),
            "Q": (self.Q.shape, (k, k)),
            "R": (self.R.shape, (c, c)),
            "m0": (self.m0.shape, (k,)),
            "P0": (self.P0.shape, (k, k)),
        }
        for name, (got, want) in checks.items():
            if got != want:
                raise DimensionMismatch(f"{name} has shape {got}, expected {want}")

    @property
    def state_dim(self) -> int:
        return self.F.shape[0]

    @property
    def obs_dim(self) -> int:
        return self.H.shape[0]


def _sym(P: np.ndarray) -> np.ndarray:
    return (P + P.T) / 2.0


def kalman_filter(
    spec: KalmanSpec, series: TimeSeries, num_samples: int = 1, seed: int = 0
) -> TimeSeries:
    """Causal filtered estimate of the observation process.

    The prior (m0, P0) is the belief about the FIRST observation's state, so
    the recursion updates on y_0 before the first transition.  S=1 returns
    the filtered means H m_t; S>1 draws samples from N(H m_t, H P_t H^T).
    """
    if not series.is_deterministic:
        raise InvalidConfig("kalman_filter input must be deterministic")
    if series.has_nan():
        raise NaNInput("kalman_filter requires NaN-free input")
    if series.n_components != spec.obs_dim:
        raise DimensionMismatch(
            f"series has {series.n_components} components, spec observes {spec.obs_dim}"
        )
    y = series.values[:, :, 0]
    T = len(series)
    k, c = spec.state_dim, spec.obs_dim
    m = spec.m0.copy()
    P = _sym(spec.P0.copy())
    I = np.eye(k)
    means = np.empty((T, c))
    covs = np.empty((T, c, c))
    for t in range(T):
        if t > 0:
            m = spec.F @ m
            P = _sym(spec.F @ P @ spec.F.T + spec.Q)
        S = spec.H @ P @ spec.H.T + spec.R
        try:
            K = np.linalg.solve(S.T, (P @ spec.H.T).T).T
        except np.linalg.LinAlgError as err:
            raise NonInvertibleInnovation(
                f"innovation covariance singular at step {t}"
            ) from err
        m = m + K @ (y[t] - spec.H @ m)
        # Joseph form: stays accurate when K -> 1 under a diffuse prior,
        # where (I - KH) P suffers catastrophic cancellation
        J = I - K @ spec.H
        P = _sym(J @ P @ J.T + K @ spec.R @ K.T)
        means[t] = spec.H @ m
        covs[t] = spec.H @ P @ spec.H.T
    if num_samples == 1:
        out = means[:, :, None]
    else:
        rng = np.random.default_rng(seed)
        out = np.empty((T, c, num_samples))
        for t in range(T):
            L = _psd_cholesky(covs[t])
            draws = L @ rng.standard_normal((c, num_samples))
            out[t] = means[t][:, None] + draws
    return series._with_values(out)


def _psd_cholesky(cov: np.ndarray) -> np.ndarray:
    try:
        return np.linalg.cholesky(cov)
    except np.linalg.LinAlgError:
        # PSD up to roundoff: clip tiny negative eigenvalues
        vals, vecs = np.linalg.eigh(_sym(cov))
        return vecs * np.sqrt(np.clip(vals, 0.0, None))


def local_level_fit(series: TimeSeries) -> KalmanSpec:
    """Fit a 1-D local-level model by maximum innovation likelihood.

    (ln Q, ln R) are optimized by Nelder-Mead from ln(var(diff)/2);
    m0 = first observation, P0 = series variance.
    """
    if not series.is_univariate:
        raise DimensionMismatch("local_level_fit takes a univariate series")
    if len(series) < 10:
        raise SeriesTooShort(f"need at least 10 points, got {len(series)}")
    y = series.univariate_values()
    m0 = float(y[0])
    p0 = max(float(y.var()), 1e-12)
    start = np.log(max(float(np.diff(y).var()) / 2.0, 1e-12))

    def neg_loglik(x: np.ndarray) -> float:
        value = -local_level_loglik(y, np.exp(x[0]), np.exp(x[1]), m0, p0)
        return value if np.isfinite(value) else np.inf

    best, _ = nelder_mead(neg_loglik, np.array([start, start]))
    return KalmanSpec(
        F=np.eye(1), H=np.eye(1),
        Q=np.array([[np.exp(best[0])]]), R=np.array([[np.exp(best[1])]]),
        m0=np.array([m0]), P0=np.array([[p0]]),
    )


def moving_average_filter(series: TimeSeries, window: int) -> TimeSeries:
    """Centered moving average; edge windows are clipped to the series."""
    T = len(series)
    if window % 2 == 0 or window < 1 or window > T:
        raise BadWindow(f"window must be odd and within [1, {T}], got {window}")
    half = window // 2
    values = series.values
    out = np.empty_like(values)
    for i in range(T):
        lo = max(0, i - half)
        hi = min(T, i + half + 1)
        out[i] = values[lo:hi].mean(axis=0)
    return series._with_values(out)
