"""Deterministic JSON, CSV and SVG artifacts.

Floats are rounded to a fixed number of significant digits before
serialization and SVG coordinates to two decimals, so rerunning a command
reproduces its files byte for byte.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from pathlib import Path

SIG_DIGITS = 12

WIDTH, HEIGHT = 640, 480
MARGIN_LEFT, MARGIN_RIGHT, MARGIN_TOP, MARGIN_BOTTOM = 70, 20, 20, 50

PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b")
HIGHLIGHT = "#ff7f0e"


def clean_float(x: float, digits: int = SIG_DIGITS) -> float:
    """Round to ``digits`` significant digits; ``-0.0`` becomes ``0.0``."""
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"non-finite value {x} in artifact")
    if x == 0.0:
        return 0.0
    out = float(f"{x:.{digits - 1}e}")
    return out + 0.0


def _clean(obj):
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, float):
        return clean_float(obj)
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if hasattr(obj, "item"):
        return _clean(obj.item())
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def resonance_rows(resonances) -> list[dict]:
    """Rows ``{re, im, ell, mult, residual}``; residuals keep three digits."""
    rows = []
    for r in resonances:
        d = r.as_dict()
        d["residual"] = clean_float(d["residual"], 3)
        rows.append(d)
    return rows


def dumps_json(payload: dict) -> str:
    return json.dumps(_clean(payload), indent=2) + "\n"


def dumps_csv(rows: list[dict], columns) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(columns), lineterminator="\n", extrasaction="ignore")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: _clean(row[k]) for k in columns})
    return buf.getvalue()


@dataclass(frozen=True)
class Axes:
    x_min: float
    x_max: float
    y_min: float
    y_max: float
    x_label: str = "Re"
    y_label: str = "Im"

    def __post_init__(self):
        if not (self.x_min < self.x_max and self.y_min < self.y_max):
            raise ValueError("degenerate axes")

    @classmethod
    def for_resonances(cls, points, pad: float = 1.08) -> "Axes":
        """Axes symmetric in the real part, from the lowest point up to ``Im = 0``."""
        xs = [abs(p[0]) for p in points]
        ys = [p[1] for p in points]
        xr = _nice_ceil(pad * max(xs)) if xs and max(xs) > 0 else 1.0
        yr = _nice_ceil(-pad * min(ys)) if ys and min(ys) < 0 else 1.0
        return cls(-xr, xr, -yr, 0.0)


def _nice_ceil(x: float) -> float:
    e = math.floor(math.log10(x))
    for m in (1.0, 2.0, 2.5, 5.0, 10.0):
        if m * 10.0 ** e >= x:
            return m * 10.0 ** e
    return 10.0 ** (e + 1)


def _ticks(lo: float, hi: float, count: int = 5):
    step = _nice_ceil((hi - lo) / count)
    start = math.ceil(lo / step - 1e-9)
    out = []
    k = start
    while k * step <= hi + 1e-9 * step:
        out.append(k * step)
        k += 1
    return out


class _Frame:
    def __init__(self, axes: Axes):
        self.axes = axes
        self.pw = WIDTH - MARGIN_LEFT - MARGIN_RIGHT
        self.ph = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM
        self.sx = self.pw / (axes.x_max - axes.x_min)
        self.sy = self.ph / (axes.y_max - axes.y_min)
        self.cx = 0.5 * (axes.x_min + axes.x_max)
        self.cx_px = MARGIN_LEFT + 0.5 * self.pw

    def x(self, v):
        # offset from the centre is rounded first so that mirrored points stay mirrored
        return self.cx_px + round((v - self.cx) * self.sx, 2)

    def y(self, v):
        return MARGIN_TOP + round((self.axes.y_max - v) * self.sy, 2)


def _f(v: float) -> str:
    s = f"{v:.2f}"
    return "0.00" if s == "-0.00" else s


def emit_svg(points, highlights=(), axes: Axes = None, curves=(), hlines=(), title: str = "",
             path=None) -> str:
    """Scatter plot of ``points`` as an SVG document.

    Parameters
    ----------
    points
        Iterable of ``(x, y, ell, group)``; ``group`` picks the colour.
    highlights
        Values of ``ell`` drawn larger in the highlight colour.
    curves
        ``(label, xs, ys)`` polylines.
    hlines
        ``(label, y)`` dashed horizontal reference lines.
    """
    points = [(float(p[0]), float(p[1]), int(p[2]), int(p[3]) if len(p) > 3 else 0) for p in points]
    for p in points:
        if not (math.isfinite(p[0]) and math.isfinite(p[1])):
            raise ValueError("points must have finite coordinates")
    if axes is None:
        axes = Axes.for_resonances(points)
    fr = _Frame(axes)
    hl = set(int(h) for h in highlights)
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {WIDTH} {HEIGHT}" '
           f'width="{WIDTH}" height="{HEIGHT}" font-family="sans-serif" font-size="11">']
    if title:
        out.append(f'<title>{title}</title>')
    x0, x1 = MARGIN_LEFT, MARGIN_LEFT + fr.pw
    y0, y1 = MARGIN_TOP, MARGIN_TOP + fr.ph
    out.append(f'<rect class="frame" x="{x0}" y="{y0}" width="{fr.pw}" height="{fr.ph}" fill="none" stroke="black"/>')
    for t in _ticks(axes.x_min, axes.x_max):
        px = _f(fr.x(t))
        out.append(f'<line class="tick" x1="{px}" y1="{y1}" x2="{px}" y2="{y1 + 5}" stroke="black"/>')
        out.append(f'<text x="{px}" y="{y1 + 18}" text-anchor="middle">{t:g}</text>')
    for t in _ticks(axes.y_min, axes.y_max):
        py = _f(fr.y(t))
        out.append(f'<line class="tick" x1="{x0 - 5}" y1="{py}" x2="{x0}" y2="{py}" stroke="black"/>')
        out.append(f'<text x="{x0 - 8}" y="{py}" text-anchor="end" dominant-baseline="middle">{t:g}</text>')
    out.append(f'<text x="{_f(fr.cx_px)}" y="{HEIGHT - 10}" text-anchor="middle">{axes.x_label}</text>')
    out.append(f'<text x="15" y="{_f(MARGIN_TOP + 0.5 * fr.ph)}" text-anchor="middle" '
               f'transform="rotate(-90 15 {_f(MARGIN_TOP + 0.5 * fr.ph)})">{axes.y_label}</text>')
    for k, (label, y) in enumerate(hlines):
        if axes.y_min <= y <= axes.y_max:
            py = _f(fr.y(y))
            out.append(f'<line class="ref" x1="{x0}" y1="{py}" x2="{x1}" y2="{py}" stroke="gray" '
                       f'stroke-dasharray="4 3"><title>{label}</title></line>')
    for k, (label, xs, ys) in enumerate(curves):
        pts = " ".join(f"{_f(fr.x(a))},{_f(fr.y(b))}" for a, b in zip(xs, ys))
        out.append(f'<polyline class="curve" points="{pts}" fill="none" stroke="{PALETTE[k % len(PALETTE)]}" '
                   f'stroke-width="1.5"><title>{label}</title></polyline>')
    for x, y, ell, group in sorted(points, key=lambda p: (p[3], p[2] in hl, p[0], p[1])):
        if ell in hl:
            out.append(f'<circle class="mark hl" cx="{_f(fr.x(x))}" cy="{_f(fr.y(y))}" r="3.50" fill="{HIGHLIGHT}" '
                       f'stroke="black" stroke-width="0.5"/>')
        else:
            out.append(f'<circle class="mark" cx="{_f(fr.x(x))}" cy="{_f(fr.y(y))}" r="2.50" '
                       f'fill="{PALETTE[group % len(PALETTE)]}"/>')
    out.append("</svg>")
    text = "\n".join(out) + "\n"
    if path is not None:
        Path(path).write_text(text)
    return text


def write_text(path, text: str):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)
    return path
