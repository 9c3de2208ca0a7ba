"""CSV tables and minimal SVG polyline plots.

CSV: UTF-8, one header row, every number rendered with %.17g so repeated
runs are byte-identical.  SVG: hand-rolled polylines with axes and tick
labels; no plotting dependency.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np


def format_number(x) -> str:
    return "%.17g" % float(x)


def write_csv(path, header, columns) -> str:
    """Write columns (equal-length sequences) under the given header names."""
    columns = [np.asarray(c) for c in columns]
    n = columns[0].shape[0]
    if any(c.shape[0] != n for c in columns):
        raise ValueError("csv columns must have equal length")
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for i in range(n):
            fh.write(",".join(format_number(c[i]) for c in columns) + "\n")
    return path


def read_csv(path):
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().strip().split(",")
        rows = [line.strip().split(",") for line in fh if line.strip()]
    data = np.array([[float(v) for v in row] for row in rows])
    return header, data


_COLORS = ("#1f6fb2", "#d1495b", "#3a9d5d", "#8a5fbf", "#c98a14", "#4a4a4a")


@dataclass
class _Frame:
    width: int = 640
    height: int = 440
    left: int = 70
    right: int = 20
    top: int = 36
    bottom: int = 52


def _ticks(lo, hi, n=5):
    if not np.isfinite(lo) or not np.isfinite(hi) or lo == hi:
        return [lo]
    return list(np.linspace(lo, hi, n))


def write_svg_lines(path, series, title="", xlabel="", ylabel="",
                    logx: bool = False, logy: bool = False) -> str:
    """Polyline plot.  ``series`` is a list of (xs, ys, label) triples."""
    frame = _Frame()
    def tx(v):
        return np.log10(v) if logx else np.asarray(v, dtype=float)
    def ty(v):
        return np.log10(v) if logy else np.asarray(v, dtype=float)

    prepared = []
    for xs, ys, label in series:
        xs = np.asarray(xs, dtype=float)
        ys = np.asarray(ys, dtype=float)
        keep = np.isfinite(xs) & np.isfinite(ys)
        if logx:
            keep &= xs > 0
        if logy:
            keep &= ys > 0
        prepared.append((tx(xs[keep]), ty(ys[keep]), label))

    all_x = np.concatenate([p[0] for p in prepared]) if prepared else np.array([0.0, 1.0])
    all_y = np.concatenate([p[1] for p in prepared]) if prepared else np.array([0.0, 1.0])
    x_lo, x_hi = float(np.min(all_x)), float(np.max(all_x))
    y_lo, y_hi = float(np.min(all_y)), float(np.max(all_y))
    if x_lo == x_hi:
        x_lo, x_hi = x_lo - 0.5, x_hi + 0.5
    if y_lo == y_hi:
        y_lo, y_hi = y_lo - 0.5, y_hi + 0.5
    pad_y = 0.05 * (y_hi - y_lo)
    y_lo, y_hi = y_lo - pad_y, y_hi + pad_y

    plot_w = frame.width - frame.left - frame.right
    plot_h = frame.height - frame.top - frame.bottom

    def px(v):
        return frame.left + (v - x_lo) / (x_hi - x_lo) * plot_w
    def py(v):
        return frame.top + (y_hi - v) / (y_hi - y_lo) * plot_h

    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{frame.width}" '
             f'height="{frame.height}" viewBox="0 0 {frame.width} {frame.height}">',
             f'<rect width="{frame.width}" height="{frame.height}" fill="white"/>',
             f'<rect x="{frame.left}" y="{frame.top}" width="{plot_w}" '
             f'height="{plot_h}" fill="none" stroke="#333" stroke-width="1"/>']
    if title:
        parts.append(f'<text x="{frame.width/2:.1f}" y="20" text-anchor="middle" '
                     f'font-family="sans-serif" font-size="14">{title}</text>')
    for tick in _ticks(x_lo, x_hi):
        xpix = px(tick)
        label = f"1e{tick:.2g}" if logx else f"{tick:.4g}"
        parts.append(f'<line x1="{xpix:.1f}" y1="{frame.top + plot_h}" '
                     f'x2="{xpix:.1f}" y2="{frame.top + plot_h + 5}" stroke="#333"/>')
        parts.append(f'<text x="{xpix:.1f}" y="{frame.top + plot_h + 18}" '
                     f'text-anchor="middle" font-family="sans-serif" '
                     f'font-size="11">{label}</text>')
    for tick in _ticks(y_lo, y_hi):
        ypix = py(tick)
        label = f"1e{tick:.2g}" if logy else f"{tick:.4g}"
        parts.append(f'<line x1="{frame.left - 5}" y1="{ypix:.1f}" '
                     f'x2="{frame.left}" y2="{ypix:.1f}" stroke="#333"/>')
        parts.append(f'<text x="{frame.left - 8}" y="{ypix + 4:.1f}" '
                     f'text-anchor="end" font-family="sans-serif" '
                     f'font-size="11">{label}</text>')
    if xlabel:
        parts.append(f'<text x="{frame.left + plot_w/2:.1f}" '
                     f'y="{frame.height - 14}" text-anchor="middle" '
                     f'font-family="sans-serif" font-size="12">{xlabel}</text>')
    if ylabel:
        parts.append(f'<text x="16" y="{frame.top + plot_h/2:.1f}" '
                     f'text-anchor="middle" font-family="sans-serif" '
                     f'font-size="12" transform="rotate(-90 16 '
                     f'{frame.top + plot_h/2:.1f})">{ylabel}</text>')
    for idx, (xs, ys, label) in enumerate(prepared):
        color = _COLORS[idx % len(_COLORS)]
        pts = " ".join(f"{px(x):.2f},{py(y):.2f}" for x, y in zip(xs, ys))
        parts.append(f'<polyline points="{pts}" fill="none" stroke="{color}" '
                     f'stroke-width="1.5"/>')
        if label:
            ytxt = frame.top + 16 + 14 * idx
            parts.append(f'<line x1="{frame.left + plot_w - 130}" y1="{ytxt - 4}" '
                         f'x2="{frame.left + plot_w - 110}" y2="{ytxt - 4}" '
                         f'stroke="{color}" stroke-width="2"/>')
            parts.append(f'<text x="{frame.left + plot_w - 105}" y="{ytxt}" '
                         f'font-family="sans-serif" font-size="11">{label}</text>')
    parts.append("</svg>")
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(parts) + "\n")
    return path
