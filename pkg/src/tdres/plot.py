"""Minimal deterministic SVG line charts.

No plotting library: the output is plain text built from fixed-format
numbers, so identical input gives byte-identical files.
"""

from __future__ import annotations

import math
from pathlib import Path
from xml.sax.saxutils import escape

import numpy as np

__all__ = ["export_plot", "nice_ticks"]

WIDTH, HEIGHT = 720, 420
MARGIN = {"left": 70, "right": 20, "top": 36, "bottom": 50}
COLORS = ("#1f4e79", "#c0392b", "#27ae60", "#8e44ad", "#d35400", "#2c3e50")


def _f(x: float) -> str:
    return f"{x:.2f}"


def nice_ticks(lo: float, hi: float, n: int = 5) -> list[float]:
    span = hi - lo
    raw = span / max(n, 1)
    mag = 10 ** math.floor(math.log10(raw))
    step = next(m * mag for m in (1, 2, 2.5, 5, 10) if m * mag >= raw)
    first = math.ceil(lo / step - 1e-9) * step
    out = []
    v = first
    while v <= hi + 1e-9 * step:
        out.append(0.0 if abs(v) < 1e-12 * step else v)
        v += step
    return out


def _range(values: np.ndarray):
    lo, hi = float(values.min()), float(values.max())
    if hi - lo <= 1e-12 * max(abs(lo), abs(hi), 1.0):
        pad = max(abs(lo) * 0.1, 1.0)
        return lo - pad, hi + pad
    pad = 0.05 * (hi - lo)
    return lo - pad, hi + pad


def export_plot(series, path, title: str = "", xlabel: str = "t", ylabel: str = "f_out",
                markers: bool = False):
    """Write an SVG with one polyline per series.

    Parameters
    ----------
    series : sequence of (label, x, y)
    path : str or Path
    markers : bool
        Draw dots instead of lines (useful for sparse extreme samples).
    """
    series = [(str(lbl), np.asarray(x, dtype=float), np.asarray(y, dtype=float)) for lbl, x, y in series]
    if not series or any(len(x) == 0 for _, x, _ in series):
        raise ValueError("export_plot needs at least one nonempty series")
    for lbl, x, y in series:
        if len(x) != len(y):
            raise ValueError(f"series {lbl!r}: x and y differ in length")
    allx = np.concatenate([x for _, x, _ in series])
    ally = np.concatenate([y for _, _, y in series])
    x0, x1 = _range(allx) if allx.max() == allx.min() else (float(allx.min()), float(allx.max()))
    y0, y1 = _range(ally)
    L, R, T, B = MARGIN["left"], WIDTH - MARGIN["right"], MARGIN["top"], HEIGHT - MARGIN["bottom"]

    def px(x):
        return L + (x - x0) / (x1 - x0) * (R - L)

    def py(y):
        return B - (y - y0) / (y1 - y0) * (B - T)

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
           f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">',
           f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>']
    if title:
        out.append(f'<text x="{WIDTH // 2}" y="22" text-anchor="middle" font-size="14">{escape(title)}</text>')
    out.append(f'<rect x="{L}" y="{T}" width="{R - L}" height="{B - T}" fill="none" stroke="#444"/>')
    for v in nice_ticks(x0, x1):
        X = _f(px(v))
        out.append(f'<line x1="{X}" y1="{B}" x2="{X}" y2="{B + 5}" stroke="#444"/>')
        out.append(f'<text x="{X}" y="{B + 18}" text-anchor="middle">{v:.6g}</text>')
    for v in nice_ticks(y0, y1):
        Y = _f(py(v))
        out.append(f'<line x1="{L - 5}" y1="{Y}" x2="{L}" y2="{Y}" stroke="#444"/>')
        out.append(f'<line x1="{L}" y1="{Y}" x2="{R}" y2="{Y}" stroke="#ddd"/>')
        out.append(f'<text x="{L - 8}" y="{Y}" text-anchor="end" dominant-baseline="middle">{v:.6g}</text>')
    out.append(f'<text x="{(L + R) // 2}" y="{HEIGHT - 12}" text-anchor="middle">{escape(xlabel)}</text>')
    out.append(f'<text x="16" y="{(T + B) // 2}" text-anchor="middle" '
               f'transform="rotate(-90 16 {(T + B) // 2})">{escape(ylabel)}</text>')
    for i, (lbl, x, y) in enumerate(series):
        color = COLORS[i % len(COLORS)]
        if markers:
            for a, b in zip(x, y):
                out.append(f'<circle cx="{_f(px(a))}" cy="{_f(py(b))}" r="2.5" fill="{color}"/>')
        else:
            pts = " ".join(f"{_f(px(a))},{_f(py(b))}" for a, b in zip(x, y))
            out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.2" points="{pts}"/>')
        ly = T + 16 + 16 * i
        out.append(f'<line x1="{R - 130}" y1="{ly}" x2="{R - 110}" y2="{ly}" stroke="{color}" stroke-width="2"/>')
        out.append(f'<text x="{R - 104}" y="{ly}" dominant-baseline="middle">{escape(lbl)}</text>')
    out.append("</svg>")
    path = Path(path)
    path.write_text("\n".join(out) + "\n", encoding="utf-8", newline="\n")
    return path
