"""Deterministic hand-emitted SVG line charts (no plotting dependency).

Byte-identical output for identical inputs: coordinates are formatted with
fixed precision and nothing depends on dict order or system state.
"""

from __future__ import annotations

import numpy as np

from .timeseries import TimeSeries

_W, _H = 900, 420
_ML, _MR, _MT, _MB = 70, 20, 30, 50  # margins
_PLOT_W = _W - _ML - _MR
_PLOT_H = _H - _MT - _MB

_HISTORY_COLOR = "#1f77b4"
_MEDIAN_COLOR = "#d62728"
_BAND_COLOR = "#d62728"


def _fmt(x: float) -> str:
    return f"{x:.2f}"


def _nice_ticks(lo: float, hi: float, target: int = 5) -> list[float]:
    if hi <= lo:
        return [lo]
    raw = (hi - lo) / target
    mag = 10.0 ** np.floor(np.log10(raw))
    step = min(s for s in (mag, 2 * mag, 2.5 * mag, 5 * mag, 10 * mag) if s >= raw)
    first = np.ceil(lo / step) * step
    return list(np.arange(first, hi + step / 2, step))


def render_forecast_chart(
    history: TimeSeries,
    median: TimeSeries,
    band_low: TimeSeries | None = None,
    band_high: TimeSeries | None = None,
    title: str = "forecast",
) -> str:
    """History line, median forecast line, optional shaded quantile band."""
    h_vals = history.values[:, 0, 0]
    m_vals = median.values[:, 0, 0]
    n_hist, n_fc = len(h_vals), len(m_vals)
    total = n_hist + n_fc

    stack = [h_vals, m_vals]
    if band_low is not None:
        stack += [band_low.values[:, 0, 0], band_high.values[:, 0, 0]]
    y_lo = float(min(v.min() for v in stack))
    y_hi = float(max(v.max() for v in stack))
    pad = (y_hi - y_lo) * 0.05 or 1.0
    y_lo, y_hi = y_lo - pad, y_hi + pad

    def sx(i: float) -> float:
        return _ML + _PLOT_W * i / max(total - 1, 1)

    def sy(v: float) -> float:
        return _MT + _PLOT_H * (1.0 - (v - y_lo) / (y_hi - y_lo))

    def polyline(xs, vs, color) -> str:
        pts = " ".join(f"{_fmt(sx(x))},{_fmt(sy(v))}" for x, v in zip(xs, vs))
        return (
            f'<polyline fill="none" stroke="{color}" stroke-width="1.5" '
            f'points="{pts}"/>'
        )

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" '
        f'viewBox="0 0 {_W} {_H}">',
        f'<rect width="{_W}" height="{_H}" fill="white"/>',
        f'<text x="{_ML}" y="20" font-family="sans-serif" font-size="14">'
        f"{title}</text>",
    ]

    if band_low is not None:
        lo_vals = band_low.values[:, 0, 0]
        hi_vals = band_high.values[:, 0, 0]
        fc_x = list(range(n_hist, total))
        ring = [(x, v) for x, v in zip(fc_x, lo_vals)]
        ring += [(x, v) for x, v in zip(reversed(fc_x), reversed(hi_vals))]
        pts = " ".join(f"{_fmt(sx(x))},{_fmt(sy(v))}" for x, v in ring)
        parts.append(
            f'<polygon fill="{_BAND_COLOR}" fill-opacity="0.2" stroke="none" '
            f'points="{pts}"/>'
        )

    parts.append(polyline(range(n_hist), h_vals, _HISTORY_COLOR))
    parts.append(polyline(range(n_hist, total), m_vals, _MEDIAN_COLOR))

    # axes
    x0, y0 = _ML, _MT + _PLOT_H
    parts.append(
        f'<line x1="{x0}" y1="{y0}" x2="{_ML + _PLOT_W}" y2="{y0}" stroke="black"/>'
    )
    parts.append(f'<line x1="{x0}" y1="{_MT}" x2="{x0}" y2="{y0}" stroke="black"/>')

    all_times = history.times() + median.times()
    n_xticks = min(6, total)
    for j in range(n_xticks):
        i = round(j * (total - 1) / max(n_xticks - 1, 1))
        x = sx(i)
        parts.append(
            f'<line x1="{_fmt(x)}" y1="{y0}" x2="{_fmt(x)}" y2="{y0 + 5}" '
            f'stroke="black"/>'
        )
        parts.append(
            f'<text x="{_fmt(x)}" y="{y0 + 20}" font-family="sans-serif" '
            f'font-size="11" text-anchor="middle">{all_times[i]}</text>'
        )
    for v in _nice_ticks(y_lo, y_hi):
        y = sy(v)
        parts.append(
            f'<line x1="{x0 - 5}" y1="{_fmt(y)}" x2="{x0}" y2="{_fmt(y)}" '
            f'stroke="black"/>'
        )
        parts.append(
            f'<text x="{x0 - 8}" y="{_fmt(y + 4)}" font-family="sans-serif" '
            f'font-size="11" text-anchor="end">{v:g}</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
