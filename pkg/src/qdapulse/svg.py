"""Minimal static SVG line charts: linear axes, one polyline per series."""
from __future__ import annotations

import math
from xml.sax.saxutils import escape

import numpy as np

WIDTH, HEIGHT = 720, 440
MARGIN_L, MARGIN_R, MARGIN_T, MARGIN_B = 70, 170, 30, 50
COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b",
          "#e377c2", "#17becf", "#7f7f7f", "#bcbd22")


def _ticks(lo: float, hi: float, n: int = 5) -> list[float]:
    span = hi - lo
    raw = span / n
    mag = 10 ** math.floor(math.log10(raw))
    step = min((m * mag for m in (1, 2, 5, 10) if m * mag >= raw), default=mag * 10)
    start = math.ceil(lo / step) * step
    out = []
    v = start
    while v <= hi + 1e-9 * span:
        out.append(0.0 if abs(v) < 1e-12 * span else v)
        v += step
    return out


def _segments(x, y):
    """Split a series at missing (None or non-finite) values."""
    seg = []
    for a, b in zip(x, y):
        if b is None or not math.isfinite(b):
            if seg:
                yield seg
            seg = []
        else:
            seg.append((a, b))
    if seg:
        yield seg


def line_chart(x, series: dict, x_label: str = "", title: str = "") -> str:
    """Render ``series`` (name -> values aligned with ``x``) as an SVG document."""
    x = [float(v) for v in x]
    if len(x) < 2:
        raise ValueError("need at least two x values")
    finite = [v for ys in series.values() for v in ys if v is not None and math.isfinite(v)]
    y_lo, y_hi = (min(finite), max(finite)) if finite else (0.0, 1.0)
    if y_hi - y_lo < 1e-300:
        y_lo, y_hi = y_lo - 0.5, y_hi + 0.5
    pad = 0.05 * (y_hi - y_lo)
    y_lo, y_hi = y_lo - pad, y_hi + pad
    x_lo, x_hi = min(x), max(x)
    pw = WIDTH - MARGIN_L - MARGIN_R
    ph = HEIGHT - MARGIN_T - MARGIN_B

    def px(v):
        return MARGIN_L + (v - x_lo) / (x_hi - x_lo) * pw

    def py(v):
        return MARGIN_T + (y_hi - v) / (y_hi - y_lo) * ph

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
           f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">',
           f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
           f'<rect x="{MARGIN_L}" y="{MARGIN_T}" width="{pw}" height="{ph}" '
           f'fill="none" stroke="black"/>']
    if title:
        out.append(f'<text x="{MARGIN_L + pw / 2:.2f}" y="{MARGIN_T - 10}" '
                   f'text-anchor="middle">{escape(title)}</text>')
    for t in _ticks(x_lo, x_hi):
        out.append(f'<line x1="{px(t):.2f}" y1="{MARGIN_T + ph}" x2="{px(t):.2f}" '
                   f'y2="{MARGIN_T + ph + 5}" stroke="black"/>')
        out.append(f'<text x="{px(t):.2f}" y="{MARGIN_T + ph + 18}" '
                   f'text-anchor="middle">{t:g}</text>')
    for t in _ticks(y_lo, y_hi):
        out.append(f'<line x1="{MARGIN_L - 5}" y1="{py(t):.2f}" x2="{MARGIN_L}" '
                   f'y2="{py(t):.2f}" stroke="black"/>')
        out.append(f'<text x="{MARGIN_L - 8}" y="{py(t) + 4:.2f}" '
                   f'text-anchor="end">{t:.4g}</text>')
    if x_label:
        out.append(f'<text x="{MARGIN_L + pw / 2:.2f}" y="{HEIGHT - 10}" '
                   f'text-anchor="middle">{escape(x_label)}</text>')
    for i, (name, ys) in enumerate(series.items()):
        color = COLORS[i % len(COLORS)]
        for seg in _segments(x, ys):
            pts = " ".join(f"{px(a):.2f},{py(b):.2f}" for a, b in seg)
            out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" '
                       f'data-series="{escape(name)}" points="{pts}"/>')
        ly = MARGIN_T + 15 + 18 * i
        lx = WIDTH - MARGIN_R + 12
        out.append(f'<line x1="{lx}" y1="{ly}" x2="{lx + 20}" y2="{ly}" '
                   f'stroke="{color}" stroke-width="2"/>')
        out.append(f'<text x="{lx + 26}" y="{ly + 4}">{escape(name)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def chart_from_rows(rows: list[dict], x_col: str, y_cols: list[str], **kw) -> str:
    x = [r[x_col] for r in rows]
    series = {c: [r.get(c) for r in rows] for c in y_cols}
    return line_chart(np.asarray(x, dtype=float), series, x_label=kw.pop("x_label", x_col), **kw)
