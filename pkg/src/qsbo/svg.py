"""Minimal static SVG charts: grouped bars with line overlays, and line plots."""

from __future__ import annotations

from html import escape
from typing import List, Optional, Sequence, Tuple

PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf"]

W, H = 640, 400
LEFT, RIGHT, TOP, BOTTOM = 60, 60, 40, 50


def _fmt(v: float) -> str:
    return f"{v:.4g}"


def _header(title: str) -> List[str]:
    return [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" '
        'font-family="sans-serif" font-size="11">',
        f'<rect width="{W}" height="{H}" fill="white"/>',
        f'<text x="{W / 2}" y="20" text-anchor="middle" font-size="14">{escape(title)}</text>',
    ]


def _axes(ymax: float, ylabel: str, xlabel: str, right_label: Optional[str] = None,
          right_max: Optional[float] = None) -> List[str]:
    x0, x1, y0, y1 = LEFT, W - RIGHT, H - BOTTOM, TOP
    out = [f'<line x1="{x0}" y1="{y0}" x2="{x1}" y2="{y0}" stroke="black"/>',
           f'<line x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}" stroke="black"/>']
    for i in range(5):
        frac = i / 4
        y = y0 - frac * (y0 - y1)
        out.append(f'<text x="{x0 - 6}" y="{y + 4:.1f}" text-anchor="end">{_fmt(frac * ymax)}</text>')
        out.append(f'<line x1="{x0}" y1="{y:.1f}" x2="{x1}" y2="{y:.1f}" stroke="#eee"/>')
        if right_max is not None:
            out.append(f'<text x="{x1 + 6}" y="{y + 4:.1f}">{_fmt(frac * right_max)}</text>')
    out.append(f'<text x="16" y="{(y0 + y1) / 2}" transform="rotate(-90 16 {(y0 + y1) / 2})" '
               f'text-anchor="middle">{escape(ylabel)}</text>')
    if right_label:
        xr = W - 14
        out.append(f'<text x="{xr}" y="{(y0 + y1) / 2}" transform="rotate(90 {xr} {(y0 + y1) / 2})" '
                   f'text-anchor="middle">{escape(right_label)}</text>')
    out.append(f'<text x="{(x0 + x1) / 2}" y="{H - 12}" text-anchor="middle">{escape(xlabel)}</text>')
    return out


def _legend(labels: Sequence[str], colors: Sequence[str]) -> List[str]:
    out = []
    for i, (lab, col) in enumerate(zip(labels, colors)):
        y = TOP + 8 + 14 * i
        out.append(f'<rect x="{W - RIGHT - 150}" y="{y - 8}" width="10" height="10" fill="{col}"/>')
        out.append(f'<text x="{W - RIGHT - 135}" y="{y + 1}">{escape(lab)}</text>')
    return out


def bars_with_lines(categories: Sequence[int], bars: Sequence[float], bar_label: str,
                    lines: Sequence[Tuple[str, Sequence[float]]], title: str,
                    xlabel: str = "quantity", line_axis: str = "supply probability",
                    bar_axis: str = "demand probability") -> str:
    """Bars on the right axis (demand) with one polyline per series (supply)."""
    n = len(categories)
    x0, x1, y0, y1 = LEFT, W - RIGHT, H - BOTTOM, TOP
    slot = (x1 - x0) / max(n, 1)
    bmax = max(max(bars, default=0.0), 1e-12) * 1.1
    lmax = max([max(v, default=0.0) for _, v in lines] + [1e-12]) * 1.1
    lmax = min(lmax, 1.0) if lmax <= 1.0 else lmax
    out = _header(title) + _axes(lmax, line_axis, xlabel, bar_axis, bmax)
    for i, (c, b) in enumerate(zip(categories, bars)):
        h = (y0 - y1) * b / bmax
        x = x0 + i * slot + slot * 0.15
        out.append(f'<rect x="{x:.1f}" y="{y0 - h:.1f}" width="{slot * 0.7:.1f}" height="{h:.1f}" '
                   'fill="#cccccc"/>')
        out.append(f'<text x="{x0 + (i + 0.5) * slot:.1f}" y="{y0 + 14}" text-anchor="middle">{c}</text>')
    colors = []
    for j, (lab, vals) in enumerate(lines):
        col = PALETTE[j % len(PALETTE)]
        colors.append(col)
        pts = " ".join(f"{x0 + (i + 0.5) * slot:.1f},{y0 - (y0 - y1) * v / lmax:.1f}"
                       for i, v in enumerate(vals))
        out.append(f'<polyline points="{pts}" fill="none" stroke="{col}" stroke-width="2"/>')
    out += _legend([bar_label] + [lab for lab, _ in lines], ["#cccccc"] + colors)
    out.append("</svg>")
    return "\n".join(out) + "\n"


def line_plot(series: Sequence[Tuple[str, Sequence[float]]], title: str, xlabel: str, ylabel: str) -> str:
    x0, x1, y0, y1 = LEFT, W - RIGHT, H - BOTTOM, TOP
    n = max((len(v) for _, v in series), default=0)
    vals = [x for _, v in series for x in v]
    lo = min(min(vals, default=0.0), 0.0)
    hi = max(max(vals, default=1.0), lo + 1e-12) * 1.05
    out = _header(title)
    out += [f'<line x1="{x0}" y1="{y0}" x2="{x1}" y2="{y0}" stroke="black"/>',
            f'<line x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}" stroke="black"/>']
    for i in range(5):
        frac = i / 4
        y = y0 - frac * (y0 - y1)
        out.append(f'<text x="{x0 - 6}" y="{y + 4:.1f}" text-anchor="end">{_fmt(lo + frac * (hi - lo))}</text>')
        out.append(f'<line x1="{x0}" y1="{y:.1f}" x2="{x1}" y2="{y:.1f}" stroke="#eee"/>')
    for i in range(5):
        frac = i / 4
        out.append(f'<text x="{x0 + frac * (x1 - x0):.1f}" y="{y0 + 14}" text-anchor="middle">'
                   f'{_fmt(1 + frac * max(n - 1, 0))}</text>')
    out.append(f'<text x="16" y="{(y0 + y1) / 2}" transform="rotate(-90 16 {(y0 + y1) / 2})" '
               f'text-anchor="middle">{escape(ylabel)}</text>')
    out.append(f'<text x="{(x0 + x1) / 2}" y="{H - 12}" text-anchor="middle">{escape(xlabel)}</text>')
    colors = []
    for j, (lab, v) in enumerate(series):
        col = PALETTE[j % len(PALETTE)]
        colors.append(col)
        step = (x1 - x0) / max(len(v) - 1, 1)
        pts = " ".join(f"{x0 + i * step:.1f},{y0 - (y0 - y1) * (x - lo) / (hi - lo):.1f}"
                       for i, x in enumerate(v))
        out.append(f'<polyline points="{pts}" fill="none" stroke="{col}" stroke-width="1.5"/>')
    out += _legend([lab for lab, _ in series], colors)
    out.append("</svg>")
    return "\n".join(out) + "\n"
