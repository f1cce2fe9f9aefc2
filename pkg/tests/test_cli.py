import shutil
import warnings
import subprocess
import xml.etree.ElementTree as ET
from pathlib import Path

import numpy as np
import pytest
import yaml

import tscast.cli
from tscast.cli import main
from tscast.datasets import load as load_dataset
from tscast.io import read_csv, write_csv

from conftest import rseries

CONFIGS = Path(__file__).resolve().parent.parent / "configs"


def write_config(tmp_path, doc, name="run.yaml"):
    p = tmp_path / name
    p.write_text(yaml.safe_dump(doc))
    return str(p)


def base_forecast_config(**predict_overrides):
    doc = {
        "data": {"datasets": ["air_passengers"]},
        "model": {"kind": "naive_seasonal", "params": {"K": 12}},
        "predict": {"n": 12, "num_samples": 1, "seed": 0},
    }
    doc["predict"].update(predict_overrides)
    return doc


# --- datasets command ---------------------------------------------------------------


def test_datasets_list(capsys):
    assert main(["datasets", "list"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert len(lines) == 2
    assert lines[0].startswith("air_passengers: 144 points")
    assert lines[1].startswith("monthly_milk: 168 points")


def test_datasets_export_round_trips(tmp_path, capsys):
    dest = tmp_path / "air.csv"
    assert main(["datasets", "export", "air_passengers", str(dest)]) == 0
    assert read_csv(dest) == load_dataset("air_passengers")


# --- forecast command ---------------------------------------------------------------


@pytest.fixture(scope="module")
def pipeline_run(tmp_path_factory):
    """One run of the committed end-to-end config, shared across tests."""
    out = tmp_path_factory.mktemp("pipeline")
    with warnings.catch_warnings():
        warnings.filterwarnings("ignore", message="model.params.epochs")
        code = main(["forecast", str(CONFIGS / "forecast_air.yaml"),
                     "--output-dir", str(out)])
    return code, out


def test_pipeline_config_succeeds(pipeline_run):
    code, out = pipeline_run
    assert code == 0
    assert sorted(p.name for p in out.iterdir()) == [
        "forecast.csv", "forecast.svg", "quantiles.csv",
    ]


def test_pipeline_forecast_csv_row_count(pipeline_run):
    _, out = pipeline_run
    lines = (out / "forecast.csv").read_text().strip().splitlines()
    assert len(lines) == 48 * 500 + 1  # n * num_samples per component, one header


def test_pipeline_quantile_summary(pipeline_run):
    _, out = pipeline_run
    lines = (out / "quantiles.csv").read_text().strip().splitlines()
    assert lines[0] == "time,component,q_low,median,q_high"
    assert len(lines) == 48 + 1
    rows = [line.split(",") for line in lines[1:]]
    lo, med, hi = (np.array([float(r[k]) for r in rows]) for k in (2, 3, 4))
    assert (lo <= med).all() and (med <= hi).all()
    assert (med > 0).all()  # passenger counts stay positive
    assert rows[0][0] == "1961-01-01"  # forecast starts after 1960-12


def test_pipeline_chart_is_svg(pipeline_run):
    _, out = pipeline_run
    root = ET.fromstring((out / "forecast.svg").read_text())
    assert root.tag.endswith("svg")


@pytest.mark.filterwarnings("ignore:model.params.epochs")
def test_forecast_reruns_byte_identical(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    cfg = str(CONFIGS / "forecast_air.yaml")
    assert main(["forecast", cfg, "--output-dir", str(a)]) == 0
    assert main(["forecast", cfg, "--output-dir", str(b)]) == 0
    for name in ("forecast.csv", "quantiles.csv", "forecast.svg"):
        assert (a / name).read_bytes() == (b / name).read_bytes()


@pytest.mark.filterwarnings("ignore:model.params.epochs")
def test_seed_override_changes_samples(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    cfg = str(CONFIGS / "forecast_air.yaml")
    assert main(["forecast", cfg, "--output-dir", str(a)]) == 0
    assert main(["forecast", cfg, "--output-dir", str(b), "--seed", "7"]) == 0
    assert (a / "forecast.csv").read_bytes() != (b / "forecast.csv").read_bytes()


def test_epochs_param_warns_and_is_ignored(tmp_path):
    with pytest.warns(UserWarning, match="epochs"):
        code = main(["forecast", str(CONFIGS / "forecast_air.yaml"),
                     "--output-dir", str(tmp_path / "o")])
    assert code == 0


def test_single_sample_band_degenerates(tmp_path, capsys):
    cfg = write_config(tmp_path, base_forecast_config())
    assert main(["forecast", cfg, "--output-dir", str(tmp_path / "o")]) == 0
    lines = (tmp_path / "o" / "quantiles.csv").read_text().strip().splitlines()
    for line in lines[1:]:
        _, _, lo, med, hi = line.split(",")
        assert lo == med == hi


def test_deterministic_model_rejects_num_samples(tmp_path, capsys):
    cfg = write_config(tmp_path, base_forecast_config(num_samples=100))
    assert main(["forecast", cfg, "--output-dir", str(tmp_path / "o")]) == 2
    err = capsys.readouterr().err
    assert err.startswith("E_CONFIG:")
    assert err.strip().count("\n") == 0


# --- backtest command ---------------------------------------------------------------


def test_backtest_air_config(tmp_path, capsys):
    out = tmp_path / "o"
    code = main(["backtest", str(CONFIGS / "backtest_air.yaml"),
                 "--output-dir", str(out)])
    assert code == 0
    stdout = capsys.readouterr().out
    lines = (out / "backtest.csv").read_text().strip().splitlines()
    assert lines[0] == "origin,score"
    # T=144, start 0.75 -> position 107, stride 12: three windows
    origins = [line.split(",")[0] for line in lines[1:]]
    assert origins == ["1957-12-01", "1958-12-01", "1959-12-01"]
    scores = [float(line.split(",")[1]) for line in lines[1:]]
    assert scores == [15.0, 41.75, 51.25]
    assert "36.0" in stdout  # mean of the three window scores


def test_backtest_on_integer_indexed_csv(tmp_path, capsys):
    src = tmp_path / "walk.csv"
    write_csv(rseries(np.cumsum(np.random.default_rng(0).normal(size=60))), src)
    cfg = write_config(tmp_path, {
        "data": {"csv": [str(src)]},
        "model": {"kind": "naive_drift"},
        "backtest": {"start": 40, "horizon": 5, "stride": 5},
    })
    assert main(["backtest", cfg, "--output-dir", str(tmp_path / "o")]) == 0
    lines = (tmp_path / "o" / "backtest.csv").read_text().strip().splitlines()
    assert [line.split(",")[0] for line in lines[1:]] == ["40", "45", "50", "55"]


# --- gridsearch command -------------------------------------------------------------


def test_gridsearch_air_config(tmp_path, capsys):
    out = tmp_path / "o"
    code = main(["gridsearch", str(CONFIGS / "gridsearch_air.yaml"),
                 "--output-dir", str(out)])
    assert code == 0
    assert "best: K=12" in capsys.readouterr().out
    lines = (out / "gridsearch.csv").read_text().strip().splitlines()
    assert lines[0] == "combination,score"
    scores = [float(line.split(",")[1]) for line in lines[1:]]
    assert scores == sorted(scores)
    assert lines[1].startswith("K=12,")


def test_gridsearch_empty_grid(tmp_path, capsys):
    cfg = write_config(tmp_path, {
        "data": {"datasets": ["air_passengers"]},
        "model": {"kind": "naive_seasonal"},
        "gridsearch": {"grid": {}, "start": 0.75, "horizon": 12},
    })
    assert main(["gridsearch", cfg]) == 2
    assert capsys.readouterr().err.startswith("E_CONFIG:")


# --- error handling -----------------------------------------------------------------


def test_missing_dataset_is_data_error(tmp_path, capsys):
    cfg = write_config(tmp_path, {
        "data": {"datasets": ["airline_passengers"]},
        "model": {"kind": "naive_drift"},
        "predict": {"n": 5},
    })
    assert main(["forecast", cfg]) == 2
    err = capsys.readouterr().err
    assert err.startswith("E_DATA:")
    assert err.strip().count("\n") == 0


def test_unknown_keys_named_with_path(tmp_path, capsys):
    cfg = write_config(tmp_path, {
        "data": {"datasets": ["air_passengers"]},
        "model": {"kind": "naive_drift"},
        "predict": {"n": 5, "banana": 1},
    })
    assert main(["forecast", cfg]) == 2
    assert "unknown key: predict.banana" in capsys.readouterr().err

    cfg = write_config(tmp_path, {
        "data": {"datasets": ["air_passengers"]},
        "model": {"kind": "naive_seasonal", "params": {"KK": 12}},
        "predict": {"n": 5},
    })
    assert main(["forecast", cfg]) == 2
    assert "unknown key: model.params.KK" in capsys.readouterr().err

    cfg = write_config(tmp_path, {"pipeline": {}})
    assert main(["forecast", cfg]) == 2
    assert "unknown key: pipeline" in capsys.readouterr().err


def test_exactly_one_action_section(tmp_path, capsys):
    doc = base_forecast_config()
    doc["backtest"] = {"start": 0.5, "horizon": 2}
    cfg = write_config(tmp_path, doc)
    assert main(["forecast", cfg]) == 2
    assert capsys.readouterr().err.startswith("E_CONFIG:")


def test_command_must_match_config_action(tmp_path, capsys):
    cfg = write_config(tmp_path, base_forecast_config())
    assert main(["backtest", cfg]) == 2
    assert capsys.readouterr().err.startswith("E_CONFIG:")


def test_unreadable_and_invalid_configs(tmp_path, capsys):
    assert main(["forecast", str(tmp_path / "absent.yaml")]) == 2
    assert capsys.readouterr().err.startswith("E_CONFIG:")
    bad = tmp_path / "bad.yaml"
    bad.write_text("model: [unclosed")
    assert main(["forecast", str(bad)]) == 2
    assert capsys.readouterr().err.startswith("E_CONFIG:")


def test_internal_errors_exit_three_and_discard_outputs(tmp_path, capsys, monkeypatch):
    def explode(*args, **kwargs):
        raise RuntimeError("chart renderer crashed")

    monkeypatch.setattr(tscast.cli, "render_forecast_chart", explode)
    out = tmp_path / "o"
    cfg = write_config(tmp_path, base_forecast_config())
    assert main(["forecast", cfg, "--output-dir", str(out)]) == 3
    err = capsys.readouterr().err
    assert err.startswith("E_INTERNAL:")
    # the CSVs written before the crash must not survive
    assert not (out / "forecast.csv").exists()
    assert not (out / "quantiles.csv").exists()


# --- packaging ----------------------------------------------------------------------


def test_console_script_installed():
    exe = shutil.which("tscast")
    assert exe, "console script not on PATH"
    proc = subprocess.run([exe, "datasets", "list"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert "air_passengers" in proc.stdout
