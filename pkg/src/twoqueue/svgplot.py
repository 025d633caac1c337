"""Dependency-free SVG line charts for trajectory output.

Deliberately minimal: polylines, axis ticks, optional dashed horizontal
marker lines, and a small legend. Long series are strided down to a
plotting resolution that keeps files small without visibly changing the
curves.
"""

from __future__ import annotations

import math

_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd")
_MAX_POINTS = 2500


def _nice_step(span: float, target: int) -> float:
    raw = span / max(target, 1)
    power = 10.0 ** math.floor(math.log10(raw))
    for mult in (1.0, 2.0, 2.5, 5.0, 10.0):
        if mult * power >= raw:
            return mult * power
    return 10.0 * power


def _ticks(lo: float, hi: float, target: int = 5) -> list[float]:
    if hi <= lo:
        return [lo]
    step = _nice_step(hi - lo, target)
    first = math.ceil(lo / step) * step
    ticks = []
    value = first
    while value <= hi + 1e-9 * step:
        ticks.append(round(value, 12))
        value += step
    return ticks


def _fmt(value: float) -> str:
    return f"{value:.6g}"


def line_chart(
    xs,
    series,
    title: str = "",
    x_label: str = "t",
    y_label: str = "queue length",
    hlines=(),
    width: int = 720,
    height: int = 460,
) -> str:
    """Render labelled (xs, ys) series plus dashed hlines as an SVG string."""
    left, right, top, bottom = 62.0, 16.0, 34.0, 46.0
    plot_w = width - left - right
    plot_h = height - top - bottom

    stride = max(1, len(xs) // _MAX_POINTS)
    xs = list(xs[::stride])
    series = [(label, list(ys[::stride])) for label, ys in series]

    x_lo, x_hi = min(xs), max(xs)
    y_values = [y for _, ys in series for y in ys] + [y for _, y in hlines]
    y_lo, y_hi = min(y_values), max(y_values)
    if y_hi == y_lo:
        y_lo, y_hi = y_lo - 1.0, y_hi + 1.0
    pad = 0.05 * (y_hi - y_lo)
    y_lo -= pad
    y_hi += pad

    def px(x):
        return left + (x - x_lo) / (x_hi - x_lo) * plot_w

    def py(y):
        return top + (y_hi - y) / (y_hi - y_lo) * plot_h

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="12">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<rect x="{left}" y="{top}" width="{plot_w:.1f}" height="{plot_h:.1f}" '
        f'fill="none" stroke="#333"/>',
    ]
    if title:
        parts.append(
            f'<text x="{width / 2:.1f}" y="20" text-anchor="middle" font-size="14">{title}</text>'
        )

    for tick in _ticks(x_lo, x_hi):
        x = px(tick)
        parts.append(
            f'<line x1="{x:.1f}" y1="{top + plot_h:.1f}" x2="{x:.1f}" '
            f'y2="{top + plot_h + 5:.1f}" stroke="#333"/>'
        )
        parts.append(
            f'<text x="{x:.1f}" y="{top + plot_h + 18:.1f}" text-anchor="middle">{_fmt(tick)}</text>'
        )
    for tick in _ticks(y_lo, y_hi):
        y = py(tick)
        parts.append(f'<line x1="{left - 5:.1f}" y1="{y:.1f}" x2="{left:.1f}" y2="{y:.1f}" stroke="#333"/>')
        parts.append(
            f'<text x="{left - 8:.1f}" y="{y + 4:.1f}" text-anchor="end">{_fmt(tick)}</text>'
        )
    parts.append(
        f'<text x="{left + plot_w / 2:.1f}" y="{height - 8}" text-anchor="middle">{x_label}</text>'
    )
    parts.append(
        f'<text x="16" y="{top + plot_h / 2:.1f}" text-anchor="middle" '
        f'transform="rotate(-90 16 {top + plot_h / 2:.1f})">{y_label}</text>'
    )

    for label, y in hlines:
        parts.append(
            f'<line x1="{left}" y1="{py(y):.2f}" x2="{left + plot_w:.1f}" y2="{py(y):.2f}" '
            f'stroke="#777" stroke-dasharray="6 4"/>'
        )
        parts.append(
            f'<text x="{left + plot_w - 4:.1f}" y="{py(y) - 4:.2f}" text-anchor="end" '
            f'fill="#555" font-size="10">{label}</text>'
        )

    for idx, (label, ys) in enumerate(series):
        color = _COLORS[idx % len(_COLORS)]
        points = " ".join(f"{px(x):.2f},{py(y):.2f}" for x, y in zip(xs, ys))
        parts.append(f'<polyline points="{points}" fill="none" stroke="{color}" stroke-width="1.3"/>')
        legend_y = top + 14 + 16 * idx
        parts.append(
            f'<line x1="{left + plot_w - 90:.1f}" y1="{legend_y - 4:.1f}" '
            f'x2="{left + plot_w - 70:.1f}" y2="{legend_y - 4:.1f}" stroke="{color}" stroke-width="2"/>'
        )
        parts.append(f'<text x="{left + plot_w - 64:.1f}" y="{legend_y:.1f}">{label}</text>')

    parts.append("</svg>")
    return "\n".join(parts) + "\n"
