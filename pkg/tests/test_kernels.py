"""The compiled and pure kernels must be interchangeable."""

import os
import subprocess
import sys

import numpy as np
import pytest

from tscast import _kernels
from tscast._kernels import _pure

_core = pytest.importorskip(
    "tscast._kernels._core", reason="compiled extension not built"
)


def _random_case(rng, T):
    y = 10.0 + np.cumsum(rng.normal(0.0, 0.5, size=T))
    m = int(rng.integers(2, 13))
    alpha, beta, gamma = rng.uniform(0.05, 0.95, size=3)
    return y, m, alpha, beta, gamma


@pytest.mark.parametrize("seasonal", [
    _pure.SEASONAL_NONE, _pure.SEASONAL_ADDITIVE, _pure.SEASONAL_MULTIPLICATIVE
])
@pytest.mark.parametrize("use_trend", [0, 1])
def test_hw_sse_backends_agree(seasonal, use_trend):
    rng = np.random.default_rng(42 + seasonal * 2 + use_trend)
    for _ in range(25):
        y, m, alpha, beta, gamma = _random_case(rng, int(rng.integers(2 * 13, 200)))
        s0 = (
            np.zeros(m)
            if seasonal != _pure.SEASONAL_MULTIPLICATIVE
            else np.ones(m)
        )
        out_a = np.empty(2 + m)
        out_b = np.empty(2 + m)
        sse_a = _pure.hw_sse(y, alpha, beta, gamma, m, use_trend, seasonal,
                             y[0], 0.0, s0, out_a)
        sse_b = _core.hw_sse(y, alpha, beta, gamma, m, use_trend, seasonal,
                             y[0], 0.0, s0, out_b)
        assert np.isclose(sse_a, sse_b, rtol=1e-12)
        assert np.allclose(out_a, out_b, rtol=1e-12)


def test_arma_residuals_backends_agree():
    rng = np.random.default_rng(7)
    for _ in range(25):
        T = int(rng.integers(10, 300))
        z = rng.normal(size=T)
        p = int(rng.integers(0, 4))
        q = int(rng.integers(0, 4))
        ar = rng.uniform(-0.5, 0.5, size=p)
        ma = rng.uniform(-0.5, 0.5, size=q)
        ra = np.empty(T)
        rb = np.empty(T)
        css_a = _pure.arma_residuals(z, ar, ma, ra)
        css_b = _core.arma_residuals(z, ar, ma, rb)
        assert np.isclose(css_a, css_b, rtol=1e-12)
        assert np.allclose(ra, rb, rtol=1e-12, atol=1e-15)


def test_local_level_loglik_backends_agree():
    rng = np.random.default_rng(8)
    for _ in range(25):
        T = int(rng.integers(10, 300))
        y = np.cumsum(rng.normal(size=T))
        q = float(rng.uniform(0.01, 5.0))
        r = float(rng.uniform(0.01, 5.0))
        a = _pure.local_level_loglik(y, q, r, y[0], 1.0)
        b = _core.local_level_loglik(y, q, r, y[0], 1.0)
        assert np.isclose(a, b, rtol=1e-12)


def test_kernels_accept_readonly_arrays():
    y = np.arange(30.0)
    y.setflags(write=False)
    s0 = np.zeros(3)
    s0.setflags(write=False)
    out = np.empty(5)
    _core.hw_sse(y, 0.3, 0.1, 0.2, 3, 1, _pure.SEASONAL_ADDITIVE,
                 y[0], 0.0, s0, out)


def test_env_var_forces_pure_backend():
    code = (
        "from tscast import _kernels; print(_kernels.BACKEND)"
    )
    env = dict(os.environ, TSCAST_PURE_KERNELS="1")
    got = subprocess.run(
        [sys.executable, "-c", code], env=env, capture_output=True, text=True
    )
    assert got.stdout.strip() == "pure"


def test_default_backend_is_compiled_when_built():
    assert _kernels.BACKEND == "compiled"


def test_full_model_agrees_across_backends():
    # same model fit under both backends gives near-identical forecasts
    code = """
import numpy as np
from tscast import TimeSeries, TimeIndex
from tscast.models import ExponentialSmoothing
rng = np.random.default_rng(5)
t = np.arange(120.0)
y = 50 + 0.3 * t + 8 * np.sin(2 * np.pi * t / 12) + rng.normal(0, 1, 120)
s = TimeSeries(TimeIndex.range(120), y[:, None, None])
f = ExponentialSmoothing(trend="additive", seasonal="additive", m=12).fit(s).predict(12)
print(",".join(repr(float(v)) for v in f.values[:, 0, 0]))
"""
    runs = {}
    for tag, env in (
        ("compiled", dict(os.environ, TSCAST_PURE_KERNELS="")),
        ("pure", dict(os.environ, TSCAST_PURE_KERNELS="1")),
    ):
        got = subprocess.run(
            [sys.executable, "-c", code], env=env, capture_output=True, text=True
        )
        assert got.returncode == 0, got.stderr
        runs[tag] = np.array([float(v) for v in got.stdout.strip().split(",")])
    assert np.allclose(runs["compiled"], runs["pure"], rtol=1e-9, atol=1e-9)
