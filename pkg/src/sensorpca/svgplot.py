"""Tiny dependency-free SVG line charts."""

from __future__ import annotations

import math
from typing import Sequence
from xml.sax.saxutils import escape

_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


def line_chart(
    series: Sequence[tuple[str, Sequence[float], Sequence[float]]],
    title: str = "",
    xlabel: str = "",
    ylabel: str = "",
    markers: Sequence[float] = (),
    width: int = 720,
    height: int = 360,
) -> str:
    """Render ``(label, xs, ys)`` series; ``markers`` are x positions drawn as triangles below the axis."""
    pad_l, pad_r, pad_t, pad_b = 60, 20, 30, 50
    xs_all = [x for _, xs, ys in series for x, y in zip(xs, ys) if _finite(x, y)]
    ys_all = [y for _, xs, ys in series for x, y in zip(xs, ys) if _finite(x, y)]
    xs_all += list(markers)
    if not xs_all:
        xs_all, ys_all = [0.0, 1.0], [0.0, 1.0]
    if not ys_all:
        ys_all = [0.0, 1.0]
    x0, x1 = min(xs_all), max(xs_all)
    y0, y1 = min(ys_all), max(ys_all)
    if x1 == x0:
        x1 = x0 + 1.0
    if y1 == y0:
        y1 = y0 + 1.0
    pw, ph = width - pad_l - pad_r, height - pad_t - pad_b

    def px(x):
        return pad_l + (x - x0) / (x1 - x0) * pw

    def py(y):
        return pad_t + (1.0 - (y - y0) / (y1 - y0)) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="11">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<text x="{width / 2:.1f}" y="18" text-anchor="middle" font-size="13">{escape(title)}</text>',
        f'<line x1="{pad_l}" y1="{pad_t + ph}" x2="{pad_l + pw}" y2="{pad_t + ph}" stroke="black"/>',
        f'<line x1="{pad_l}" y1="{pad_t}" x2="{pad_l}" y2="{pad_t + ph}" stroke="black"/>',
        f'<text x="{pad_l + pw / 2:.1f}" y="{height - 8}" text-anchor="middle">{escape(xlabel)}</text>',
        f'<text x="14" y="{pad_t + ph / 2:.1f}" text-anchor="middle" '
        f'transform="rotate(-90 14 {pad_t + ph / 2:.1f})">{escape(ylabel)}</text>',
    ]
    for frac in (0.0, 0.5, 1.0):
        yv = y0 + frac * (y1 - y0)
        xv = x0 + frac * (x1 - x0)
        out.append(f'<text x="{pad_l - 4}" y="{py(yv) + 4:.1f}" text-anchor="end">{yv:.3g}</text>')
        out.append(f'<text x="{px(xv):.1f}" y="{pad_t + ph + 14}" text-anchor="middle">{xv:.3g}</text>')
    for i, (label, xs, ys) in enumerate(series):
        color = _COLORS[i % len(_COLORS)]
        pts = " ".join(f"{px(x):.2f},{py(y):.2f}" for x, y in zip(xs, ys) if _finite(x, y))
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{pts}"/>')
        out.append(
            f'<text x="{pad_l + pw - 4}" y="{pad_t + 14 + 14 * i}" text-anchor="end" fill="{color}">{escape(label)}</text>'
        )
    base = pad_t + ph + 22
    for m in markers:
        x = px(m)
        out.append(f'<path d="M{x:.2f},{base - 6} L{x - 4:.2f},{base} L{x + 4:.2f},{base} Z" fill="black"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _finite(x, y) -> bool:
    return x is not None and y is not None and math.isfinite(x) and math.isfinite(y)
