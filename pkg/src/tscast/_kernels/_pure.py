"""Pure-Python kernels: reference implementations of the hot recursions.

These run the same sequential loops as the compiled extension in
``_core.pyx`` and are selected automatically when the extension is not
built (or when TSCAST_PURE_KERNELS is set). Inputs are 1-D float64
arrays; outputs are written into caller-provided buffers exactly as the
compiled versions do.
"""

from __future__ import annotations

import math

SEASONAL_NONE = 0
SEASONAL_ADDITIVE = 1
SEASONAL_MULTIPLICATIVE = 2


def hw_sse(y, alpha, beta, gamma, m, use_trend, seasonal,
           level0, trend0, seasonal0, state_out):
    """One-step-ahead SSE of the Holt-Winters recursion.

    state_out receives [level_T, trend_T, s_0..s_{m-1}] where s_j is the
    latest seasonal index for phase j (position t uses phase t % m).
    Returns the sum of squared one-step errors; inf/nan propagate so the
    optimizer can reject the parameter point.
    """
    T = len(y)
    level = float(level0)
    trend = float(trend0) if use_trend else 0.0
    seas = [float(s) for s in seasonal0]
    sse = 0.0
    for t in range(T):
        base = level + trend
        if seasonal == SEASONAL_ADDITIVE:
            forecast = base + seas[t % m]
        elif seasonal == SEASONAL_MULTIPLICATIVE:
            forecast = base * seas[t % m]
        else:
            forecast = base
        err = y[t] - forecast
        sse += err * err
        prev_level = level
        if seasonal == SEASONAL_ADDITIVE:
            level = alpha * (y[t] - seas[t % m]) + (1.0 - alpha) * base
        elif seasonal == SEASONAL_MULTIPLICATIVE:
            level = alpha * (y[t] / seas[t % m]) + (1.0 - alpha) * base
        else:
            level = alpha * y[t] + (1.0 - alpha) * base
        if use_trend:
            trend = beta * (level - prev_level) + (1.0 - beta) * trend
        if seasonal == SEASONAL_ADDITIVE:
            seas[t % m] = gamma * (y[t] - base) + (1.0 - gamma) * seas[t % m]
        elif seasonal == SEASONAL_MULTIPLICATIVE:
            seas[t % m] = gamma * (y[t] / base) + (1.0 - gamma) * seas[t % m]
    state_out[0] = level
    state_out[1] = trend
    for j in range(m):
        state_out[2 + j] = seas[j]
    return sse


def arma_residuals(z, ar, ma, resid_out):
    """Recursive ARMA residuals with zero pre-sample residuals.

    resid_out[t] = z_t - sum_i ar_i z_{t-i} - sum_j ma_j e_{t-j}; the
    first len(ar) observations are burn-in (residual forced to 0).
    Returns the conditional sum of squares over t >= len(ar).
    """
    p = len(ar)
    q = len(ma)
    N = len(z)
    css = 0.0
    for t in range(N):
        if t < p:
            resid_out[t] = 0.0
            continue
        e = z[t]
        for i in range(p):
            e -= ar[i] * z[t - 1 - i]
        for j in range(q):
            if t - 1 - j >= 0:
                e -= ma[j] * resid_out[t - 1 - j]
        resid_out[t] = e
        css += e * e
    return css


def local_level_loglik(y, q, r, m0, p0):
    """Innovation-form Gaussian log-likelihood of a local-level model.

    The prior (m0, p0) applies to the first observation directly; the
    process noise q enters between observations.
    """
    T = len(y)
    m = float(m0)
    P = float(p0)
    ll = 0.0
    log2pi = math.log(2.0 * math.pi)
    for t in range(T):
        S = P + r
        v = y[t] - m
        ll -= 0.5 * (log2pi + math.log(S) + v * v / S)
        K = P / S
        m += K * v
        P = (1.0 - K) * P
        P += q
    return ll
