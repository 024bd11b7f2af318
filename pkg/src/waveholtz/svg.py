"""Minimal self-contained SVG line/scatter charts.

Each series embeds its exact data as a JSON ``<metadata>`` element, so a
chart can always be checked bit-for-bit against the CSV it illustrates.
Output is deterministic: a chart depends only on its inputs.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

__all__ = ["Series", "render_chart"]

_PALETTE = ["#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#17becf"]
_MARGIN_L, _MARGIN_R, _MARGIN_T, _MARGIN_B = 64, 16, 28, 44


@dataclass
class Series:
    name: str
    x: np.ndarray
    y: np.ndarray
    kind: str = "line"  # "line" | "dashed" | "scatter"

    def finite_mask(self, x_log: bool, y_log: bool) -> np.ndarray:
        x = np.asarray(self.x, dtype=float)
        y = np.asarray(self.y, dtype=float)
        ok = np.isfinite(x) & np.isfinite(y)
        if x_log:
            ok &= x > 0.0
        if y_log:
            ok &= y > 0.0
        return ok


def _ticks(lo: float, hi: float, log: bool):
    if log:
        lo_d = math.floor(math.log10(lo))
        hi_d = math.ceil(math.log10(hi))
        vals = [10.0**d for d in range(lo_d, hi_d + 1) if lo <= 10.0**d <= hi]
        return vals or [lo, hi]
    if hi == lo:
        return [lo]
    step = 10.0 ** math.floor(math.log10((hi - lo) / 4.0))
    for mult in (1.0, 2.0, 5.0, 10.0):
        if (hi - lo) / (step * mult) <= 5.5:
            step *= mult
            break
    first = math.ceil(lo / step) * step
    vals = []
    v = first
    while v <= hi + 1e-12 * abs(hi):
        vals.append(v)
        v += step
    return vals or [lo, hi]


def _fmt(v: float) -> str:
    if v == 0.0:
        return "0"
    if abs(v) >= 1e4 or abs(v) < 1e-3:
        return f"{v:.1e}"
    return f"{v:.4g}"


def render_chart(
    path,
    series,
    title: str = "",
    x_label: str = "",
    y_label: str = "",
    x_log: bool = False,
    y_log: bool = False,
    width: int = 640,
    height: int = 440,
) -> Path:
    """Write an SVG chart; returns the path.

    Points that are non-finite (or nonpositive on a log axis) break line
    segments and are omitted from scatters, but remain in the embedded
    metadata verbatim.
    """
    xs, ys = [], []
    for s in series:
        m = s.finite_mask(x_log, y_log)
        xs.append(np.asarray(s.x, dtype=float)[m])
        ys.append(np.asarray(s.y, dtype=float)[m])
    allx = np.concatenate([v for v in xs if v.size]) if any(v.size for v in xs) else np.array([0.0, 1.0])
    ally = np.concatenate([v for v in ys if v.size]) if any(v.size for v in ys) else np.array([0.0, 1.0])
    x_lo, x_hi = float(np.min(allx)), float(np.max(allx))
    y_lo, y_hi = float(np.min(ally)), float(np.max(ally))
    if x_lo == x_hi:
        x_lo, x_hi = x_lo - 1.0, x_hi + 1.0
    if y_lo == y_hi:
        y_lo, y_hi = y_lo - 1.0, y_hi + 1.0
    if not x_log:
        pad = 0.04 * (x_hi - x_lo)
        x_lo, x_hi = x_lo - pad, x_hi + pad
    if not y_log:
        pad = 0.04 * (y_hi - y_lo)
        y_lo, y_hi = y_lo - pad, y_hi + pad

    plot_w = width - _MARGIN_L - _MARGIN_R
    plot_h = height - _MARGIN_T - _MARGIN_B

    def to_px(xv, yv):
        tx = (math.log10(xv) - math.log10(x_lo)) / (math.log10(x_hi) - math.log10(x_lo)) if x_log else (
            (xv - x_lo) / (x_hi - x_lo)
        )
        ty = (math.log10(yv) - math.log10(y_lo)) / (math.log10(y_hi) - math.log10(y_lo)) if y_log else (
            (yv - y_lo) / (y_hi - y_lo)
        )
        return _MARGIN_L + tx * plot_w, _MARGIN_T + (1.0 - ty) * plot_h

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="monospace" font-size="11">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
        f'<rect x="{_MARGIN_L}" y="{_MARGIN_T}" width="{plot_w}" height="{plot_h}" '
        f'fill="none" stroke="#333"/>',
    ]
    if title:
        parts.append(
            f'<text x="{width / 2:.1f}" y="{_MARGIN_T - 10}" text-anchor="middle">{title}</text>'
        )
    for tv in _ticks(x_lo, x_hi, x_log):
        px, _ = to_px(tv, y_hi)
        parts.append(
            f'<line x1="{px:.1f}" y1="{_MARGIN_T + plot_h}" x2="{px:.1f}" '
            f'y2="{_MARGIN_T + plot_h + 4}" stroke="#333"/>'
        )
        parts.append(
            f'<text x="{px:.1f}" y="{_MARGIN_T + plot_h + 16}" text-anchor="middle">{_fmt(tv)}</text>'
        )
    for tv in _ticks(y_lo, y_hi, y_log):
        _, py = to_px(x_hi, tv)
        parts.append(
            f'<line x1="{_MARGIN_L - 4}" y1="{py:.1f}" x2="{_MARGIN_L}" y2="{py:.1f}" stroke="#333"/>'
        )
        parts.append(
            f'<text x="{_MARGIN_L - 6}" y="{py + 3:.1f}" text-anchor="end">{_fmt(tv)}</text>'
        )
    if x_label:
        parts.append(
            f'<text x="{_MARGIN_L + plot_w / 2:.1f}" y="{height - 8}" text-anchor="middle">'
            f"{x_label}</text>"
        )
    if y_label:
        parts.append(
            f'<text x="14" y="{_MARGIN_T + plot_h / 2:.1f}" text-anchor="middle" '
            f'transform="rotate(-90 14 {_MARGIN_T + plot_h / 2:.1f})">{y_label}</text>'
        )

    for idx, s in enumerate(series):
        color = _PALETTE[idx % len(_PALETTE)]
        m = s.finite_mask(x_log, y_log)
        x = np.asarray(s.x, dtype=float)
        y = np.asarray(s.y, dtype=float)
        data = json.dumps(
            {"name": s.name, "x": [float(v) for v in x], "y": [float(v) for v in y]}
        )
        parts.append(f'<metadata id="series:{s.name}">{data}</metadata>')
        if s.kind == "scatter":
            for xv, yv in zip(x[m], y[m]):
                px, py = to_px(xv, yv)
                parts.append(f'<circle cx="{px:.2f}" cy="{py:.2f}" r="2.5" fill="{color}"/>')
        else:
            dash = ' stroke-dasharray="6 4"' if s.kind == "dashed" else ""
            segment: list[str] = []
            for ok, xv, yv in zip(m, x, y):
                if ok:
                    px, py = to_px(xv, yv)
                    segment.append(f"{px:.2f},{py:.2f}")
                elif segment:
                    parts.append(
                        f'<polyline points="{" ".join(segment)}" fill="none" '
                        f'stroke="{color}" stroke-width="1.5"{dash}/>'
                    )
                    segment = []
            if segment:
                parts.append(
                    f'<polyline points="{" ".join(segment)}" fill="none" '
                    f'stroke="{color}" stroke-width="1.5"{dash}/>'
                )
        ly = _MARGIN_T + 14 + 14 * idx
        parts.append(
            f'<line x1="{width - _MARGIN_R - 110}" y1="{ly - 4}" x2="{width - _MARGIN_R - 90}" '
            f'y2="{ly - 4}" stroke="{color}" stroke-width="2"/>'
        )
        parts.append(f'<text x="{width - _MARGIN_R - 84}" y="{ly}">{s.name}</text>')

    parts.append("</svg>")
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("\n".join(parts) + "\n", encoding="utf-8", newline="\n")
    return path
