"""Command-line front end: config-driven forecast, backtest, grid search.

Exit codes: 0 success, 2 configuration/data/model error, 3 internal error.
Every failure prints exactly one line ``E_CODE: message`` to stderr and
removes any partially written output files.
"""

from __future__ import annotations

import argparse
import itertools
import sys
import warnings
from pathlib import Path

import numpy as np
import yaml

from . import datasets as datasets_mod
from .evaluation import (
    METRIC_KINDS,
    BacktestPlan,
    backtest as run_backtest,
    historical_forecasts,
    metric as run_metric,
)
from .exceptions import (
    ConfigError,
    CorruptBundle,
    EmptyGrid,
    ForecastError,
    NonUniformTimeGrid,
    UnknownDataset,
)
from .io import _format_time, read_csv, write_csv
from .models import (
    ARIMA,
    ExponentialSmoothing,
    FFTForecaster,
    LaggedRegression,
    NaiveDrift,
    NaiveSeasonal,
    Theta,
)
from .plotting import render_forecast_chart
from .timeseries import TimeSeries
from .transforms import MinMaxScaler, StandardScaler

_MODELS = {
    "naive_seasonal": (NaiveSeasonal, {"K"}),
    "naive_drift": (NaiveDrift, set()),
    "exponential_smoothing": (ExponentialSmoothing, {"trend", "seasonal", "m"}),
    "theta": (Theta, {"m", "theta"}),
    "fft": (FFTForecaster, {"trend_degree", "top_k"}),
    "arima": (ARIMA, {"p", "d", "q"}),
    "regression": (
        LaggedRegression,
        {
            "input_chunk_length",
            "output_chunk_length",
            "target_lags",
            "past_cov_lags",
            "ridge_lambda",
            "likelihood",
        },
    ),
}

_SCALERS = {"minmax": MinMaxScaler, "standard": StandardScaler, "none": None}

_SECTION_KEYS = {
    "data": {"datasets", "csv"},
    "transform": {"scaler"},
    "model": {"kind", "params"},
    "predict": {"n", "num_samples", "seed", "quantile_band", "series"},
    "backtest": {
        "start", "horizon", "stride", "retrain",
        "metric", "reduction", "m", "q", "series",
    },
    "gridsearch": {
        "grid", "start", "horizon", "stride", "retrain",
        "metric", "reduction", "m", "q", "series",
    },
    "output": {
        "dir", "forecast_csv", "quantiles_csv", "chart_svg",
        "backtest_csv", "gridsearch_csv",
    },
}
_ACTIONS = ("predict", "backtest", "gridsearch")


# --- config ------------------------------------------------------------------

def _load_config(path: str) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as err:
        raise ConfigError(f"cannot read config {path}: {err}") from err
    try:
        cfg = yaml.safe_load(text)
    except yaml.YAMLError as err:
        raise ConfigError(f"config {path} is not valid YAML: {err}") from err
    if not isinstance(cfg, dict):
        raise ConfigError(f"config {path} must be a mapping of sections")
    return cfg


def _validate_config(cfg: dict, command: str) -> None:
    for key, section in cfg.items():
        if key not in _SECTION_KEYS:
            raise ConfigError(f"unknown key: {key}")
        if not isinstance(section, dict):
            raise ConfigError(f"section {key} must be a mapping")
        for sub in section:
            if sub not in _SECTION_KEYS[key]:
                raise ConfigError(f"unknown key: {key}.{sub}")
    actions = [a for a in _ACTIONS if a in cfg]
    if len(actions) != 1:
        raise ConfigError(
            f"config must contain exactly one of {_ACTIONS}, found {actions or 'none'}"
        )
    wanted = {"forecast": "predict"}.get(command, command)
    if actions[0] != wanted:
        raise ConfigError(
            f"command {command!r} needs a {wanted!r} section, config has {actions[0]!r}"
        )
    if "data" not in cfg:
        raise ConfigError("missing section: data")
    if "model" not in cfg:
        raise ConfigError("missing section: model")


def _get(section: dict, key: str, default=None, required: bool = False):
    if key in section:
        return section[key]
    if required:
        raise ConfigError(f"missing required key: {key}")
    return default


def _load_data(cfg: dict) -> dict[str, TimeSeries]:
    data = cfg["data"]
    series: dict[str, TimeSeries] = {}
    for name in _get(data, "datasets", []) or []:
        series[name] = datasets_mod.load(name)
    for path in _get(data, "csv", []) or []:
        series[Path(path).stem] = read_csv(path)
    if not series:
        raise ConfigError("data section names no datasets or csv files")
    return series


def _pick_series(series: dict[str, TimeSeries], name, where: str) -> tuple[str, TimeSeries]:
    if name is None:
        first = next(iter(series))
        return first, series[first]
    if name not in series:
        raise ConfigError(f"{where}.series {name!r} is not among the loaded series "
                          f"({sorted(series)})")
    return name, series[name]


def _model_factory(cfg: dict):
    model = cfg["model"]
    kind = _get(model, "kind", required=True)
    if kind not in _MODELS:
        raise ConfigError(f"unknown model kind {kind!r} (available: {sorted(_MODELS)})")
    cls, allowed = _MODELS[kind]
    params = dict(_get(model, "params", {}) or {})
    if "epochs" in params:
        warnings.warn(
            "model.params.epochs has no effect on a closed-form model; ignored",
            UserWarning,
            stacklevel=2,
        )
        params.pop("epochs")
    for key in params:
        if key not in allowed:
            raise ConfigError(f"unknown key: model.params.{key}")

    def factory(**overrides):
        return cls(**{**params, **overrides})

    return kind, factory


def _plan_from(section: dict) -> BacktestPlan:
    return BacktestPlan(
        start=_get(section, "start", required=True),
        horizon=int(_get(section, "horizon", required=True)),
        stride=int(_get(section, "stride", 1)),
        retrain=bool(_get(section, "retrain", True)),
    )


def _metric_args(section: dict) -> dict:
    kind = _get(section, "metric", "mae")
    if kind not in METRIC_KINDS:
        raise ConfigError(f"unknown metric {kind!r} (available: {METRIC_KINDS})")
    return {
        "kind": kind,
        "reduction": _get(section, "reduction", "mean"),
        "m": _get(section, "m"),
        "q": float(_get(section, "q", 0.5)),
    }


# --- output tracking -----------------------------------------------------------

class _Outputs:
    """Records written files so a failure can remove partial results."""

    def __init__(self, cfg: dict, override_dir: str | None) -> None:
        out = cfg.get("output", {})
        self.dir = Path(override_dir or _get(out, "dir", "."))
        self.names = out
        self.written: list[Path] = []

    def path(self, key: str, default: str) -> Path:
        self.dir.mkdir(parents=True, exist_ok=True)
        p = self.dir / _get(self.names, key, default)
        self.written.append(p)
        return p

    def discard(self) -> None:
        for p in self.written:
            try:
                p.unlink()
            except OSError:
                pass


# --- commands ------------------------------------------------------------------

def _cmd_forecast(cfg: dict, out: _Outputs, seed_override: int | None) -> int:
    pred_cfg = cfg["predict"]
    n = int(_get(pred_cfg, "n", required=True))
    num_samples = int(_get(pred_cfg, "num_samples", 1))
    seed = int(_get(pred_cfg, "seed", 0)) if seed_override is None else seed_override
    band = _get(pred_cfg, "quantile_band", [0.1, 0.9])
    if (not isinstance(band, (list, tuple)) or len(band) != 2
            or not 0 < band[0] < band[1] < 1):
        raise ConfigError(f"predict.quantile_band must be [low, high] in (0,1), got {band}")

    series = _load_data(cfg)
    target_name, target = _pick_series(series, _get(pred_cfg, "series"), "predict")

    scaler_kind = _get(cfg.get("transform", {}), "scaler", "none")
    if scaler_kind not in _SCALERS:
        raise ConfigError(
            f"unknown scaler {scaler_kind!r} (available: {sorted(_SCALERS)})"
        )
    scalers = {}
    scaled = {}
    for name, s in series.items():
        if _SCALERS[scaler_kind] is None:
            scaled[name] = s
        else:
            scalers[name] = _SCALERS[scaler_kind]()
            scaled[name] = scalers[name].fit_transform(s)

    kind, factory = _model_factory(cfg)
    model = factory()
    if kind == "regression":
        model.fit(list(scaled.values()))
        fc_scaled = model.predict(n, series=scaled[target_name],
                                  num_samples=num_samples, seed=seed)
    else:
        if num_samples != 1:
            raise ConfigError(
                f"model kind {kind!r} is deterministic; num_samples must be 1"
            )
        model.fit(scaled[target_name])
        fc_scaled = model.predict(n)

    if target_name in scalers:
        forecast = scalers[target_name].inverse_transform(fc_scaled)
    else:
        forecast = fc_scaled

    write_csv(forecast, out.path("forecast_csv", "forecast.csv"))

    if forecast.is_deterministic:
        lo = med = hi = forecast
    else:
        lo = forecast.quantile(band[0])
        med = forecast.quantile(0.5)
        hi = forecast.quantile(band[1])
    lines = ["time,component,q_low,median,q_high"]
    for i, t in enumerate(forecast.times()):
        for j, comp in enumerate(forecast.components):
            cells = (lo.values[i, j, 0], med.values[i, j, 0], hi.values[i, j, 0])
            lines.append(
                f"{_format_time(t)},{comp}," + ",".join(repr(float(v)) for v in cells)
            )
    out.path("quantiles_csv", "quantiles.csv").write_text("\n".join(lines) + "\n")

    svg = render_forecast_chart(
        target, med, lo, hi,
        title=f"{target_name}: {n}-step forecast "
              f"(band {band[0]:g}-{band[1]:g}, {num_samples} samples)",
    )
    out.path("chart_svg", "forecast.svg").write_text(svg)
    print(f"wrote {len(out.written)} files to {out.dir}")
    return 0


def _cmd_backtest(cfg: dict, out: _Outputs, seed_override: int | None) -> int:
    section = cfg["backtest"]
    series = _load_data(cfg)
    _, target = _pick_series(series, _get(section, "series"), "backtest")
    _, factory = _model_factory(cfg)
    plan = _plan_from(section)
    margs = _metric_args(section)

    origins = plan.origins(target)
    forecasts = historical_forecasts(factory, target, plan)
    lines = ["origin,score"]
    scores = []
    for p, fc in zip(origins, forecasts):
        actual = target.slice_positions(p, p + plan.horizon)
        score = run_metric(margs["kind"], actual, fc,
                           insample=target.slice_positions(0, p),
                           m=margs["m"], q=margs["q"])
        scores.append(score)
        lines.append(f"{_format_time(target.index[p])},{score!r}")
    out.path("backtest_csv", "backtest.csv").write_text("\n".join(lines) + "\n")
    reduced = float(np.mean(scores) if margs["reduction"] == "mean"
                    else np.median(scores))
    print(f"{margs['kind']} ({margs['reduction']} over {len(scores)} windows): "
          f"{reduced!r}")
    return 0


def _cmd_gridsearch(cfg: dict, out: _Outputs, seed_override: int | None) -> int:
    section = cfg["gridsearch"]
    grid = _get(section, "grid", required=True)
    if not isinstance(grid, dict) or not grid or any(
        not isinstance(v, list) or not v for v in grid.values()
    ):
        raise EmptyGrid(f"gridsearch.grid must map parameters to non-empty lists, got {grid!r}")
    series = _load_data(cfg)
    _, target = _pick_series(series, _get(section, "series"), "gridsearch")
    _, factory = _model_factory(cfg)
    plan = _plan_from(section)
    margs = _metric_args(section)

    names = list(grid)
    results = []
    failures = []
    for combo_vals in itertools.product(*grid.values()):
        combo = dict(zip(names, combo_vals))
        try:
            score = run_backtest(
                lambda: factory(**combo), target, plan, margs["kind"],
                reduction=margs["reduction"], m=margs["m"], q=margs["q"],
            )
        except ForecastError as err:
            failures.append((combo, err))
            continue
        results.append((combo, score))
    if not results:
        raise EmptyGrid(
            "all grid combinations failed: "
            + "; ".join(f"{c}: {e}" for c, e in failures)
        )
    results.sort(key=lambda item: item[1])
    lines = ["combination,score"]
    for combo, score in results:
        label = ";".join(f"{k}={combo[k]}" for k in names)
        lines.append(f"{label},{score!r}")
    out.path("gridsearch_csv", "gridsearch.csv").write_text("\n".join(lines) + "\n")
    best, best_score = results[0]
    print("best: " + ";".join(f"{k}={best[k]}" for k in names) + f" -> {best_score!r}")
    return 0


def _cmd_datasets(args) -> int:
    if args.action == "list":
        for desc in datasets_mod.list_datasets():
            s = datasets_mod.load(desc.name)
            print(f"{desc.name}: {desc.length} points, "
                  f"{_format_time(s.start)}..{_format_time(s.end)}")
        return 0
    # export
    series = datasets_mod.load(args.name)
    write_csv(series, args.path)
    print(f"wrote {args.name} to {args.path}")
    return 0


# --- entry point ------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tscast", description="time series forecasting toolkit"
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for cmd in ("forecast", "backtest", "gridsearch"):
        p = sub.add_parser(cmd)
        p.add_argument("config", help="path to the YAML run configuration")
        p.add_argument("--seed", type=int, default=None, help="override predict.seed")
        p.add_argument("--output-dir", default=None, help="override output.dir")
    pd = sub.add_parser("datasets")
    dsub = pd.add_subparsers(dest="action", required=True)
    dsub.add_parser("list")
    pe = dsub.add_parser("export")
    pe.add_argument("name")
    pe.add_argument("path")
    return parser


def _error_line(code: str, err: Exception) -> None:
    message = " ".join(str(err).split()) or type(err).__name__
    print(f"{code}: {message}", file=sys.stderr)


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    out = None
    try:
        if args.command == "datasets":
            return _cmd_datasets(args)
        cfg = _load_config(args.config)
        _validate_config(cfg, args.command)
        out = _Outputs(cfg, args.output_dir)
        if args.command == "forecast":
            return _cmd_forecast(cfg, out, args.seed)
        if args.command == "backtest":
            return _cmd_backtest(cfg, out, args.seed)
        return _cmd_gridsearch(cfg, out, args.seed)
    except (ConfigError, EmptyGrid) as err:
        if out:
            out.discard()
        _error_line("E_CONFIG", err)
        return 2
    except (UnknownDataset, CorruptBundle, NonUniformTimeGrid, OSError) as err:
        if out:
            out.discard()
        _error_line("E_DATA", err)
        return 2
    except ForecastError as err:
        if out:
            out.discard()
        _error_line("E_MODEL", err)
        return 2
    except Exception as err:  # noqa: BLE001 - last-resort internal error
        if out:
            out.discard()
        _error_line("E_INTERNAL", err)
        return 3


if __name__ == "__main__":
    sys.exit(main())
