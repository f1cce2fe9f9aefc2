"""Global lagged-feature ridge regression over one or many series.

One weight matrix maps [target lags | past-covariate lags | future covariates]
to all output_chunk_length * n_components outputs at once; horizons beyond
output_chunk_length are covered by autoregressive rounds that feed each
trajectory's own (sampled) predictions back as inputs.
"""

from __future__ import annotations

import json

import numpy as np
from scipy.linalg import cho_factor, cho_solve

from ..exceptions import (
    InvalidConfig,
    ModelFormatError,
    NotFitted,
    ShapeMismatch,
    SingularSystem,
)
from ..likelihoods import Likelihood, fit_residuals, likelihood_kinds
from ..timeseries import TimeSeries
from ..windowing import build_samples, extract_inference_window
from .base import ForecastingModel

FORMAT_VERSION = 1


def _check_lags(lags, L_in: int, what: str) -> list[int]:
    lags = [int(k) for k in lags]
    if not lags:
        raise InvalidConfig(f"{what} must not be empty")
    if len(set(lags)) != len(lags):
        raise InvalidConfig(f"{what} contains duplicate offsets: {lags}")
    lags = sorted(lags)
    if lags[0] < 1 or lags[-1] > L_in:
        raise InvalidConfig(f"{what} must lie in [1, {L_in}], got {lags}")
    return lags


class LaggedRegression(ForecastingModel):
    """Closed-form ridge regression on lagged windows (a global model)."""

    def __init__(
        self,
        input_chunk_length: int,
        output_chunk_length: int,
        *,
        target_lags: list[int] | None = None,
        past_cov_lags: list[int] | None = None,
        use_future_covariates: bool = False,
        ridge_lambda: float = 0.0,
        likelihood: str | None = None,
    ) -> None:
        super().__init__()
        if input_chunk_length < 1 or output_chunk_length < 1:
            raise InvalidConfig("chunk lengths must be positive")
        self.L_in = int(input_chunk_length)
        self.L_out = int(output_chunk_length)
        self.target_lags = _check_lags(
            target_lags if target_lags is not None else range(1, self.L_in + 1),
            self.L_in,
            "target_lags",
        )
        self.past_cov_lags = (
            None if past_cov_lags is None
            else _check_lags(past_cov_lags, self.L_in, "past_cov_lags")
        )
        self.use_future_covariates = bool(use_future_covariates)
        if ridge_lambda < 0:
            raise InvalidConfig(f"ridge_lambda must be >= 0, got {ridge_lambda}")
        self.ridge_lambda = float(ridge_lambda)
        if likelihood is not None and likelihood not in likelihood_kinds():
            raise InvalidConfig(
                f"unknown likelihood {likelihood!r} (available: {likelihood_kinds()})"
            )
        self.likelihood = likelihood
        self.min_train_length = self.L_in + self.L_out
        self._train_targets: list[TimeSeries] | None = None

    # -- fitting ---------------------------------------------------------------

    @staticmethod
    def _normalize(series, what: str) -> list[TimeSeries] | None:
        if series is None:
            return None
        if isinstance(series, TimeSeries):
            return [series]
        out = list(series)
        if not out:
            raise InvalidConfig(f"{what} list is empty")
        return out

    def _sample_features(self, past_target, past_covs, future_covs) -> np.ndarray:
        parts = [past_target[self.L_in - k] for k in self.target_lags]
        if self._uses_past_covs:
            parts += [past_covs[self.L_in - k] for k in self._past_lags]
        if self.use_future_covariates:
            parts.append(future_covs.reshape(-1))
        return np.concatenate(parts)

    def fit(
        self,
        series,
        past_covariates=None,
        future_covariates=None,
    ) -> "LaggedRegression":
        targets = self._normalize(series, "series")
        past_covs = self._normalize(past_covariates, "past_covariates")
        future_covs = self._normalize(future_covariates, "future_covariates")

        if past_covs is None and self.past_cov_lags is not None:
            raise InvalidConfig("past_cov_lags configured but no past_covariates given")
        self._past_lags = (
            self.past_cov_lags if self.past_cov_lags is not None
            else list(range(1, self.L_in + 1))
        )
        if self.use_future_covariates != (future_covs is not None):
            raise InvalidConfig(
                "future_covariates must be passed exactly when "
                f"use_future_covariates=True (flag is {self.use_future_covariates})"
            )
        self._uses_past_covs = past_covs is not None

        C_t = targets[0].n_components
        if any(t.n_components != C_t for t in targets):
            raise ShapeMismatch("all target series must have the same component count")

        seq = build_samples(
            targets, past_covs, future_covs,
            L_in=self.L_in, L_out=self.L_out, stride=1,
        )
        first = seq[0]
        F = self._sample_features(
            first.past_target, first.past_covs, first.future_covs
        ).size
        X = np.empty((len(seq), F))
        Y = np.empty((len(seq), self.L_out * C_t))
        for i in range(len(seq)):
            s = seq[i]
            X[i] = self._sample_features(s.past_target, s.past_covs, s.future_covs)
            Y[i] = s.future_target.reshape(-1)

        A = np.column_stack([X, np.ones(len(X))])
        G = A.T @ A
        G[np.arange(F), np.arange(F)] += self.ridge_lambda  # intercept unpenalized
        try:
            B = cho_solve(cho_factor(G), A.T @ Y)
        except np.linalg.LinAlgError as err:
            hint = "; use ridge_lambda > 0" if self.ridge_lambda == 0 else ""
            raise SingularSystem(f"normal equations are singular{hint}") from err

        # C-contiguous copies so predictions are bit-identical after save/load
        self.W_ = np.ascontiguousarray(B[:-1])
        self.intercept_ = np.ascontiguousarray(B[-1])
        self._n_target_components = C_t
        residuals = Y - A @ B
        self._likelihood_fit: Likelihood | None = (
            fit_residuals(self.likelihood, residuals) if self.likelihood else None
        )
        self._train_targets = targets
        self._train_past = past_covs
        self._train_future = future_covs
        self._remember(targets[0])
        self._fitted = True
        return self

    # -- prediction --------------------------------------------------------------

    def predict(
        self,
        n: int,
        series: TimeSeries | None = None,
        past_covariates: TimeSeries | None = None,
        future_covariates: TimeSeries | None = None,
        num_samples: int = 1,
        seed: int = 0,
    ) -> TimeSeries:
        self._require_fitted()
        self._check_horizon(n)
        if num_samples < 1:
            raise InvalidConfig(f"num_samples must be >= 1, got {num_samples}")
        if num_samples > 1 and self._likelihood_fit is None:
            raise InvalidConfig(
                "num_samples > 1 needs a likelihood; construct the model with one"
            )
        if past_covariates is not None and not self._uses_past_covs:
            raise InvalidConfig(
                "model was fitted without past covariates; drop past_covariates="
            )
        if future_covariates is not None and not self.use_future_covariates:
            raise InvalidConfig(
                "model was fitted without future covariates; drop future_covariates="
            )
        if series is None:
            if self._train_targets is None or len(self._train_targets) != 1:
                raise InvalidConfig(
                    "model was not trained on exactly one series; pass series="
                )
            series = self._train_targets[0]
            if past_covariates is None and self._train_past is not None:
                past_covariates = self._train_past[0]
            if future_covariates is None and self._train_future is not None:
                future_covariates = self._train_future[0]
        if series.n_components != self._n_target_components:
            raise ShapeMismatch(
                f"model fitted on {self._n_target_components}-component targets, "
                f"series has {series.n_components}"
            )
        if self._uses_past_covs and past_covariates is None:
            raise InvalidConfig("model uses past covariates; pass past_covariates=")
        if self.use_future_covariates and future_covariates is None:
            raise InvalidConfig("model uses future covariates; pass future_covariates=")

        win = extract_inference_window(
            series,
            past_covariates if self._uses_past_covs else None,
            future_covariates if self.use_future_covariates else None,
            L_in=self.L_in, n=n, L_out=self.L_out,
        )
        S = num_samples
        C_t = self._n_target_components
        hist = np.repeat(win.past_target[:, :, None], S, axis=2)
        rng = np.random.default_rng(seed)
        chunks = []
        for j in range(win.rounds):
            X = self._round_features(hist, win, j, S)
            P = X @ self.W_ + self.intercept_
            block = P.reshape(S, self.L_out, C_t).transpose(1, 2, 0)
            if S > 1:
                block = block + self._likelihood_fit._noise(rng, block.shape)
            chunks.append(block)
            hist = np.concatenate([hist, block], axis=0)[-self.L_in :]
        out = np.concatenate(chunks, axis=0)[:n]
        return TimeSeries(series.index.after(n), out, components=series.components)

    def _round_features(self, hist, win, j: int, S: int) -> np.ndarray:
        parts = [hist[self.L_in - k].T for k in self.target_lags]  # (S, C_t) each
        if self._uses_past_covs:
            block = win.past_cov_blocks[j]
            flat = np.concatenate([block[self.L_in - k] for k in self._past_lags])
            parts.append(np.broadcast_to(flat, (S, flat.size)))
        if self.use_future_covariates:
            flat = win.future_cov_blocks[j].reshape(-1)
            parts.append(np.broadcast_to(flat, (S, flat.size)))
        return np.column_stack(parts)

    # -- serialization -------------------------------------------------------------

    def to_payload(self) -> dict:
        self._require_fitted()
        return {
            "format_version": FORMAT_VERSION,
            "config": {
                "input_chunk_length": self.L_in,
                "output_chunk_length": self.L_out,
                "target_lags": self.target_lags,
                "past_cov_lags": self.past_cov_lags,
                "use_future_covariates": self.use_future_covariates,
                "ridge_lambda": self.ridge_lambda,
                "likelihood": self.likelihood,
            },
            "layout": {
                "order": "target lags asc x components, past-cov lags asc x "
                         "components, future-cov steps x components, intercept",
                "n_target_components": self._n_target_components,
                "uses_past_covs": self._uses_past_covs,
                "past_lags": self._past_lags if self._uses_past_covs else None,
            },
            "weights": self.W_.tolist(),
            "intercept": self.intercept_.tolist(),
            "likelihood_fit": (
                self._likelihood_fit.to_payload() if self._likelihood_fit else None
            ),
            "components": self._component_names,
        }

    def save(self, path: str) -> None:
        with open(path, "w") as f:
            json.dump(self.to_payload(), f)

    @classmethod
    def from_payload(cls, payload: dict) -> "LaggedRegression":
        try:
            version = payload["format_version"]
            if version != FORMAT_VERSION:
                raise ModelFormatError(
                    f"format version {version} not supported (expected {FORMAT_VERSION})"
                )
            cfg = payload["config"]
            model = cls(
                cfg["input_chunk_length"],
                cfg["output_chunk_length"],
                target_lags=cfg["target_lags"],
                past_cov_lags=cfg["past_cov_lags"],
                use_future_covariates=cfg["use_future_covariates"],
                ridge_lambda=cfg["ridge_lambda"],
                likelihood=cfg["likelihood"],
            )
            model.W_ = np.asarray(payload["weights"], dtype=float)
            model.intercept_ = np.asarray(payload["intercept"], dtype=float)
            model._n_target_components = payload["layout"]["n_target_components"]
            model._uses_past_covs = payload["layout"]["uses_past_covs"]
            model._past_lags = payload["layout"]["past_lags"]
            lk = payload["likelihood_fit"]
            model._likelihood_fit = Likelihood.from_payload(lk) if lk else None
            model._component_names = payload["components"]
        except (KeyError, TypeError) as err:
            raise ModelFormatError(f"bad model payload: {err}") from err
        model._fitted = True
        return model

    @classmethod
    def load(cls, path: str) -> "LaggedRegression":
        with open(path) as f:
            try:
                payload = json.load(f)
            except json.JSONDecodeError as err:
                raise ModelFormatError(f"not a model file: {err}") from err
        return cls.from_payload(payload)
