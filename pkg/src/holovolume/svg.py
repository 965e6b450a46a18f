"""Minimal SVG emission for sanity plots (line plots and heatmaps).

Output is deterministic: coordinates are rounded to 0.01 px and no
timestamps or ids depend on the run.
"""
from __future__ import annotations

from dataclasses import dataclass
from xml.sax.saxutils import escape

import numpy as np

WIDTH, HEIGHT = 640, 420
MARGIN = 60

STYLES = {
    "bold": 'stroke="black" stroke-width="3" fill="none"',
    "thin": 'stroke="black" stroke-width="1" fill="none"',
    "dashed": 'stroke="black" stroke-width="1.5" stroke-dasharray="8,5" fill="none"',
}


@dataclass(frozen=True)
class Series:
    x: np.ndarray
    y: np.ndarray
    label: str
    style: str = "thin"


def _num(v: float) -> str:
    return f"{v:.2f}"


def _ticks(lo: float, hi: float, n: int = 5) -> np.ndarray:
    return np.linspace(lo, hi, n)


def _header(title: str) -> list[str]:
    return [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">',
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<text x="{WIDTH // 2}" y="24" text-anchor="middle" font-size="14">{escape(title)}</text>',
    ]


def line_plot(series: list[Series], title: str, xlabel: str = "x", ylabel: str = "") -> str:
    xs = np.concatenate([np.asarray(s.x, float) for s in series])
    ys = np.concatenate([np.asarray(s.y, float) for s in series])
    x0, x1 = float(xs.min()), float(xs.max())
    y0, y1 = float(ys.min()), float(ys.max())
    pad = 0.05 * (y1 - y0 or 1.0)
    y0, y1 = y0 - pad, y1 + pad
    if x1 == x0:
        x1 = x0 + 1.0
    pw, ph = WIDTH - 2 * MARGIN, HEIGHT - 2 * MARGIN

    def px(x):
        return MARGIN + (x - x0) / (x1 - x0) * pw

    def py(y):
        return HEIGHT - MARGIN - (y - y0) / (y1 - y0) * ph

    out = _header(title)
    out.append(f'<rect x="{MARGIN}" y="{MARGIN}" width="{pw}" height="{ph}" fill="none" stroke="#888"/>')
    if y0 < 0 < y1:
        out.append(f'<line x1="{MARGIN}" x2="{WIDTH - MARGIN}" y1="{_num(py(0))}" y2="{_num(py(0))}" stroke="#ccc"/>')
    for t in _ticks(x0, x1):
        out.append(f'<text x="{_num(px(t))}" y="{HEIGHT - MARGIN + 16}" text-anchor="middle">{t:.3g}</text>')
    for t in _ticks(y0, y1):
        out.append(f'<text x="{MARGIN - 6}" y="{_num(py(t) + 4)}" text-anchor="end">{t:.3g}</text>')
    out.append(f'<text x="{WIDTH // 2}" y="{HEIGHT - 18}" text-anchor="middle">{escape(xlabel)}</text>')
    if ylabel:
        out.append(f'<text x="16" y="{HEIGHT // 2}" transform="rotate(-90 16 {HEIGHT // 2})" text-anchor="middle">{escape(ylabel)}</text>')
    for k, s in enumerate(series):
        pts = " ".join(f"{_num(px(a))},{_num(py(b))}" for a, b in zip(s.x, s.y))
        style = STYLES.get(s.style, STYLES["thin"])
        out.append(f'<path d="M {pts.replace(" ", " L ")}" {style}/>')
        ly = MARGIN + 14 + 18 * k
        lx = WIDTH - MARGIN - 150
        out.append(f'<line x1="{lx}" x2="{lx + 30}" y1="{ly}" y2="{ly}" {style}/>')
        out.append(f'<text x="{lx + 36}" y="{ly + 4}">{escape(s.label)} ({s.style})</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _colour(t: float) -> str:
    # white to dark blue
    t = min(max(t, 0.0), 1.0)
    r = int(round(255 * (1 - t) + 8 * t))
    g = int(round(255 * (1 - t) + 48 * t))
    b = int(round(255 * (1 - t) + 107 * t))
    return f"#{r:02x}{g:02x}{b:02x}"


def heatmap(xs, ys, values, title: str, xlabel: str, ylabel: str) -> str:
    """values[i, j] belongs to (xs[i], ys[j]); cells are drawn on an index lattice."""
    v = np.asarray(values, float)
    lo, hi = float(np.nanmin(v)), float(np.nanmax(v))
    span = hi - lo or 1.0
    nx, ny = v.shape
    pw, ph = WIDTH - 2 * MARGIN - 80, HEIGHT - 2 * MARGIN
    cw, chh = pw / nx, ph / ny
    out = _header(title)
    for i in range(nx):
        for j in range(ny):
            x = MARGIN + i * cw
            y = HEIGHT - MARGIN - (j + 1) * chh
            fill = "#ff00ff" if np.isnan(v[i, j]) else _colour((v[i, j] - lo) / span)
            out.append(f'<rect x="{_num(x)}" y="{_num(y)}" width="{_num(cw)}" height="{_num(chh)}" fill="{fill}"/>')
            if nx * ny <= 64 and not np.isnan(v[i, j]):
                tc = "white" if (v[i, j] - lo) / span > 0.6 else "black"
                out.append(f'<text x="{_num(x + cw / 2)}" y="{_num(y + chh / 2 + 4)}" text-anchor="middle" fill="{tc}">{v[i, j]:.3f}</text>')
    for i, xv in enumerate(xs):
        out.append(f'<text x="{_num(MARGIN + (i + 0.5) * cw)}" y="{HEIGHT - MARGIN + 16}" text-anchor="middle">{xv:g}</text>')
    for j, yv in enumerate(ys):
        out.append(f'<text x="{MARGIN - 6}" y="{_num(HEIGHT - MARGIN - (j + 0.5) * chh + 4)}" text-anchor="end">{yv:g}</text>')
    out.append(f'<text x="{MARGIN + pw // 2}" y="{HEIGHT - 18}" text-anchor="middle">{escape(xlabel)}</text>')
    out.append(f'<text x="16" y="{HEIGHT // 2}" transform="rotate(-90 16 {HEIGHT // 2})" text-anchor="middle">{escape(ylabel)}</text>')
    # colour bar
    bx = WIDTH - MARGIN - 40
    for k in range(20):
        y = HEIGHT - MARGIN - (k + 1) * ph / 20
        out.append(f'<rect x="{bx}" y="{_num(y)}" width="16" height="{_num(ph / 20 + 0.5)}" fill="{_colour(k / 19)}"/>')
    out.append(f'<text x="{bx + 20}" y="{HEIGHT - MARGIN}">{lo:.3g}</text>')
    out.append(f'<text x="{bx + 20}" y="{MARGIN + 10}">{hi:.3g}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
