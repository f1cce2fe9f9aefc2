# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels for the hot sequential recursions.

Signatures and semantics mirror _pure.py exactly; see that module for
the reference documentation.
"""

from libc.math cimport log, M_PI


cpdef double hw_sse(const double[::1] y, double alpha, double beta, double gamma,
                    int m, bint use_trend, int seasonal,
                    double level0, double trend0, const double[::1] seasonal0,
                    double[::1] state_out):
    cdef Py_ssize_t T = y.shape[0]
    cdef Py_ssize_t t, j
    cdef double level = level0
    cdef double trend = trend0 if use_trend else 0.0
    cdef double sse = 0.0
    cdef double base, forecast, err, prev_level
    # seasonal working state lives in the tail of state_out
    for j in range(m):
        state_out[2 + j] = seasonal0[j]
    for t in range(T):
        base = level + trend
        if seasonal == 1:
            forecast = base + state_out[2 + t % m]
        elif seasonal == 2:
            forecast = base * state_out[2 + t % m]
        else:
            forecast = base
        err = y[t] - forecast
        sse += err * err
        prev_level = level
        if seasonal == 1:
            level = alpha * (y[t] - state_out[2 + t % m]) + (1.0 - alpha) * base
        elif seasonal == 2:
            level = alpha * (y[t] / state_out[2 + t % m]) + (1.0 - alpha) * base
        else:
            level = alpha * y[t] + (1.0 - alpha) * base
        if use_trend:
            trend = beta * (level - prev_level) + (1.0 - beta) * trend
        if seasonal == 1:
            state_out[2 + t % m] = (gamma * (y[t] - base)
                                    + (1.0 - gamma) * state_out[2 + t % m])
        elif seasonal == 2:
            state_out[2 + t % m] = (gamma * (y[t] / base)
                                    + (1.0 - gamma) * state_out[2 + t % m])
    state_out[0] = level
    state_out[1] = trend
    return sse


cpdef double arma_residuals(const double[::1] z, const double[::1] ar,
                            const double[::1] ma, double[::1] resid_out):
    cdef Py_ssize_t p = ar.shape[0]
    cdef Py_ssize_t q = ma.shape[0]
    cdef Py_ssize_t N = z.shape[0]
    cdef Py_ssize_t t, i, j
    cdef double css = 0.0
    cdef double e
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


cpdef double local_level_loglik(const double[::1] y, double q, double r,
                                double m0, double p0):
    cdef Py_ssize_t T = y.shape[0]
    cdef Py_ssize_t t
    cdef double m = m0
    cdef double P = p0
    cdef double ll = 0.0
    cdef double log2pi = log(2.0 * M_PI)
    cdef double S, v, K
    for t in range(T):
        S = P + r
        v = y[t] - m
        ll -= 0.5 * (log2pi + log(S) + v * v / S)
        K = P / S
        m += K * v
        P = (1.0 - K) * P
        P += q
    return ll
