"""Residual distributions that turn point forecasts into sampled forecasts.

A likelihood is fitted per output coordinate on the training residual matrix
(one column per flattened (horizon step, component) pair).  Sampling adds
i.i.d. noise per coordinate; num_samples=1 means "point forecast, no noise".
"""

from __future__ import annotations

import warnings

import numpy as np

from .exceptions import (
    DataWarning,
    NotFitted,
    ShapeMismatch,
    TooFewResiduals,
    UnsupportedLikelihoodOperation,
)

_SCALE_FLOOR = 1e-12
_LOG_2PI = float(np.log(2.0 * np.pi))


def _floored(scale: np.ndarray, what: str) -> np.ndarray:
    if (scale < _SCALE_FLOOR).any():
        warnings.warn(
            f"{what} has degenerate (all-zero) residual columns; "
            f"scale floored at {_SCALE_FLOOR}",
            DataWarning,
            stacklevel=3,
        )
        scale = np.maximum(scale, _SCALE_FLOOR)
    return scale


class Likelihood:
    """Base: per-coordinate noise distribution over a (steps, components) block."""

    kind = "base"

    @property
    def n_coords(self) -> int:
        raise NotImplementedError

    def _noise(self, rng: np.random.Generator, shape: tuple[int, int, int]) -> np.ndarray:
        """(A, B, S) noise block; A*B must equal n_coords."""
        raise NotImplementedError

    def _check_block(self, block: np.ndarray) -> None:
        if block.size != self.n_coords:
            raise ShapeMismatch(
                f"block has {block.size} coordinates, likelihood fitted on "
                f"{self.n_coords}"
            )

    def sample(self, point: np.ndarray, num_samples: int, seed: int = 0) -> np.ndarray:
        """(A, B) point block -> (A, B, S); S=1 returns the point unaltered."""
        self._check_block(point)
        out = np.repeat(point[:, :, None], num_samples, axis=2)
        if num_samples == 1:
            return out
        rng = np.random.default_rng(seed)
        return out + self._noise(rng, out.shape)

    def nll(self, observed: np.ndarray, point: np.ndarray) -> float:
        if observed.shape != point.shape:
            raise ShapeMismatch(
                f"observed shape {observed.shape} != forecast shape {point.shape}"
            )
        self._check_block(point)
        return self._nll(observed - point)

    def _nll(self, errors: np.ndarray) -> float:
        raise NotImplementedError

    # serialization hooks (used by the global model's save/load)
    def to_payload(self) -> dict:
        raise NotImplementedError

    @staticmethod
    def from_payload(payload: dict) -> "Likelihood":
        kind = payload["kind"]
        cls = _KINDS[kind]
        return cls._from_payload(payload)


class GaussianLikelihood(Likelihood):
    kind = "gaussian"

    def __init__(self, sigma: np.ndarray) -> None:
        self.sigma = np.asarray(sigma, dtype=float)

    @property
    def n_coords(self) -> int:
        return self.sigma.size

    def _noise(self, rng, shape):
        return rng.standard_normal(shape) * self.sigma.reshape(shape[0], shape[1], 1)

    def _nll(self, errors):
        sig = self.sigma.reshape(errors.shape)
        return float(
            np.sum(0.5 * _LOG_2PI + np.log(sig) + errors**2 / (2.0 * sig**2))
        )

    def to_payload(self):
        return {"kind": self.kind, "sigma": self.sigma.tolist()}

    @classmethod
    def _from_payload(cls, payload):
        return cls(np.asarray(payload["sigma"], dtype=float))


class LaplaceLikelihood(Likelihood):
    kind = "laplace"

    def __init__(self, b: np.ndarray) -> None:
        self.b = np.asarray(b, dtype=float)

    @property
    def n_coords(self) -> int:
        return self.b.size

    def _noise(self, rng, shape):
        # inverse CDF of Laplace(0, b) applied to uniform draws
        u = rng.random(shape) - 0.5
        return -self.b.reshape(shape[0], shape[1], 1) * np.sign(u) * np.log1p(
            -2.0 * np.abs(u)
        )

    def _nll(self, errors):
        b = self.b.reshape(errors.shape)
        return float(np.sum(np.log(2.0 * b) + np.abs(errors) / b))

    def to_payload(self):
        return {"kind": self.kind, "b": self.b.tolist()}

    @classmethod
    def _from_payload(cls, payload):
        return cls(np.asarray(payload["b"], dtype=float))


class EmpiricalQuantileLikelihood(Likelihood):
    """Noise drawn uniformly with replacement from the sorted residual pool."""

    kind = "quantile"

    def __init__(self, pool: np.ndarray) -> None:
        pool = np.asarray(pool, dtype=float)
        if pool.ndim != 2 or pool.shape[0] < 1:
            raise NotFitted("empirical likelihood needs a non-empty residual pool")
        self.pool = pool  # (n_residuals, n_coords), sorted per column

    @property
    def n_coords(self) -> int:
        return self.pool.shape[1]

    def _noise(self, rng, shape):
        n, F = self.pool.shape
        idx = rng.integers(0, n, size=(F, shape[2]))
        drawn = self.pool[idx, np.arange(F)[:, None]]  # (F, S)
        return drawn.reshape(shape[0], shape[1], shape[2])

    def _nll(self, errors):
        raise UnsupportedLikelihoodOperation(
            "empirical-quantile likelihood has no closed-form density"
        )

    def to_payload(self):
        return {"kind": self.kind, "pool": self.pool.tolist()}

    @classmethod
    def _from_payload(cls, payload):
        return cls(np.asarray(payload["pool"], dtype=float))


_KINDS: dict[str, type] = {
    "gaussian": GaussianLikelihood,
    "laplace": LaplaceLikelihood,
    "quantile": EmpiricalQuantileLikelihood,
}


def likelihood_kinds() -> list[str]:
    return sorted(_KINDS)


def fit_residuals(kind: str, residuals: np.ndarray) -> Likelihood:
    """Fit a likelihood column-wise on a (rows, coordinates) residual matrix."""
    if kind not in _KINDS:
        raise UnsupportedLikelihoodOperation(
            f"unknown likelihood kind {kind!r} (available: {likelihood_kinds()})"
        )
    residuals = np.asarray(residuals, dtype=float)
    if residuals.ndim != 2 or residuals.shape[0] < 2:
        raise TooFewResiduals(
            f"need a residual matrix with >= 2 rows, got shape {residuals.shape}"
        )
    if kind == "gaussian":
        return GaussianLikelihood(
            _floored(residuals.std(axis=0, ddof=1), "Gaussian likelihood")
        )
    if kind == "laplace":
        return LaplaceLikelihood(
            _floored(np.abs(residuals).mean(axis=0), "Laplace likelihood")
        )
    return EmpiricalQuantileLikelihood(np.sort(residuals, axis=0))
