"""Compare the compiled kernels against their pure-Python twins.

Run from the repository root after an editable install:

    python3 benchmarks/bench_kernels.py [--sizes 200,2000,20000] [--repeats 50]

For each kernel and input size the script times both backends on identical
inputs, checks they agree to near machine precision, and prints the speedup.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from tscast._kernels import _pure

try:
    from tscast._kernels import _core
except ImportError:
    _core = None


def _time(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def bench_hw_sse(impl, y, repeats):
    m = 12
    state = np.empty(2 + m)
    seasonal0 = np.zeros(m)

    def run():
        return impl.hw_sse(y, 0.3, 0.1, 0.2, m, 1, _pure.SEASONAL_ADDITIVE,
                           y[:m].mean(), 0.0, seasonal0, state)

    return _time(run, repeats)


def bench_arma(impl, y, repeats):
    z = y - y.mean()
    ar = np.array([0.5, -0.2])
    ma = np.array([0.3])
    resid = np.empty(len(z))

    def run():
        return impl.arma_residuals(z, ar, ma, resid)

    return _time(run, repeats)


def bench_local_level(impl, y, repeats):
    def run():
        return impl.local_level_loglik(y, 0.5, 1.0, y[0], 1.0)

    return _time(run, repeats)


BENCHES = [
    ("hw_sse", bench_hw_sse),
    ("arma_residuals", bench_arma),
    ("local_level_loglik", bench_local_level),
]


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", default="200,2000,20000",
                        help="comma-separated input lengths")
    parser.add_argument("--repeats", type=int, default=50,
                        help="timing repeats; the best run is reported")
    args = parser.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]

    if _core is None:
        print("compiled extension not built; nothing to compare")
        return 1

    rng = np.random.default_rng(0)
    print(f"{'kernel':<20} {'T':>7} {'pure (us)':>12} {'compiled (us)':>14} {'speedup':>8}")
    for T in sizes:
        y = 10.0 + np.cumsum(rng.normal(0.0, 0.5, size=T))
        for name, bench in BENCHES:
            t_pure, out_pure = bench(_pure, y, args.repeats)
            t_core, out_core = bench(_core, y, args.repeats)
            if not np.isclose(out_pure, out_core, rtol=1e-12, atol=1e-12):
                raise SystemExit(
                    f"{name}: backends disagree at T={T}: {out_pure} vs {out_core}")
            print(f"{name:<20} {T:>7} {t_pure * 1e6:>12.1f} "
                  f"{t_core * 1e6:>14.1f} {t_pure / t_core:>7.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
