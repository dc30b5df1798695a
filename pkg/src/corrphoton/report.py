"""Deterministic CSV tables and minimal SVG line charts."""

from __future__ import annotations

import math
from pathlib import Path

from . import __version__
from .constants import TABLE_VERSION

TOOL = "corrphoton"


def fmt(value) -> str:
    if isinstance(value, bool):
        return "pass" if value else "fail"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return format(value, ".17g")
    if isinstance(value, complex):
        return f"{value.real:.17g}{value.imag:+.17g}j"
    if hasattr(value, "item"):          # numpy scalars
        return fmt(value.item())
    return str(value)


class Table:
    def __init__(self, columns, command: str):
        self.columns = list(columns)
        self.rows = []
        self.meta = [("tool", f"{TOOL} {__version__}"), ("constants", TABLE_VERSION),
                     ("command", command)]
        self.footer = []

    def add(self, *values):
        if len(values) != len(self.columns):
            raise ValueError(f"row has {len(values)} values, expected {len(self.columns)}")
        self.rows.append(values)

    def render(self) -> str:
        out = [f"# {k}={fmt(v)}" for k, v in self.meta]
        out.append(",".join(self.columns))
        out.extend(",".join(fmt(v) for v in row) for row in self.rows)
        out.extend(f"# {k}={fmt(v)}" for k, v in self.footer)
        return "\n".join(out) + "\n"

    def write(self, path: Path):
        path.write_bytes(self.render().encode("utf-8"))


def read_table(path: Path):
    """(metadata dict, header, rows) from a table written by :class:`Table`."""
    meta, header, rows = {}, None, []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if line.startswith("#"):
            k, _, v = line[1:].strip().partition("=")
            meta[k] = v
        elif header is None:
            header = line.split(",")
        else:
            rows.append(line.split(","))
    return meta, header, rows


# --------------------------------------------------------------------------
# SVG

W, H = 640, 420
ML, MR, MT, MB = 80, 20, 40, 60


def _ticks_linear(lo, hi, n=5):
    if hi == lo:
        return [lo]
    step = 10 ** math.floor(math.log10((hi - lo) / n))
    for mult in (1, 2, 5, 10):
        if (hi - lo) / (step * mult) <= n:
            step *= mult
            break
    start = math.ceil(lo / step) * step
    ticks = []
    t = start
    while t <= hi + 1e-12 * abs(step):
        ticks.append(round(t, 12))
        t += step
    return ticks


def _ticks_log(lo, hi):
    return [10.0 ** k for k in range(math.ceil(math.log10(lo) - 1e-12), math.floor(math.log10(hi) + 1e-12) + 1)]


def line_chart(x, y, title: str, xlabel: str, ylabel: str, logx=False, logy=False) -> str:
    pts = [(float(a), float(b)) for a, b in zip(x, y)
           if math.isfinite(a) and math.isfinite(b) and (not logx or a > 0) and (not logy or b > 0)]
    tx = (lambda v: math.log10(v)) if logx else (lambda v: v)
    ty = (lambda v: math.log10(v)) if logy else (lambda v: v)
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">',
        f'<rect x="0" y="0" width="{W}" height="{H}" fill="white"/>',
        f'<text x="{W / 2:.1f}" y="24" text-anchor="middle" font-family="sans-serif" font-size="15">{title}</text>',
    ]
    x0, x1, y0, y1 = ML, W - MR, H - MB, MT
    parts.append(f'<line x1="{x0}" y1="{y0}" x2="{x1}" y2="{y0}" stroke="black"/>')
    parts.append(f'<line x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}" stroke="black"/>')
    parts.append(f'<text x="{(x0 + x1) / 2:.1f}" y="{H - 15}" text-anchor="middle" '
                 f'font-family="sans-serif" font-size="12">{xlabel}</text>')
    parts.append(f'<text x="18" y="{(y0 + y1) / 2:.1f}" text-anchor="middle" font-family="sans-serif" '
                 f'font-size="12" transform="rotate(-90 18 {(y0 + y1) / 2:.1f})">{ylabel}</text>')
    if pts:
        xs = [tx(p[0]) for p in pts]
        ys = [ty(p[1]) for p in pts]
        xlo, xhi = min(xs), max(xs)
        ylo, yhi = min(ys), max(ys)
        if xhi == xlo:
            xlo, xhi = xlo - 0.5, xhi + 0.5
        if yhi == ylo:
            ylo, yhi = ylo - 0.5, yhi + 0.5
        sx = lambda v: x0 + (v - xlo) / (xhi - xlo) * (x1 - x0)
        sy = lambda v: y0 - (v - ylo) / (yhi - ylo) * (y0 - y1)
        xt = [tx(t) for t in _ticks_log(10 ** xlo, 10 ** xhi)] if logx else _ticks_linear(xlo, xhi)
        yt = [ty(t) for t in _ticks_log(10 ** ylo, 10 ** yhi)] if logy else _ticks_linear(ylo, yhi)
        for v in xt:
            label = f"1e{v:.0f}" if logx else f"{v:.4g}"
            parts.append(f'<line x1="{sx(v):.2f}" y1="{y0}" x2="{sx(v):.2f}" y2="{y0 + 5}" stroke="black"/>')
            parts.append(f'<text x="{sx(v):.2f}" y="{y0 + 18}" text-anchor="middle" '
                         f'font-family="sans-serif" font-size="10">{label}</text>')
        for v in yt:
            label = f"1e{v:.0f}" if logy else f"{v:.4g}"
            parts.append(f'<line x1="{x0 - 5}" y1="{sy(v):.2f}" x2="{x0}" y2="{sy(v):.2f}" stroke="black"/>')
            parts.append(f'<text x="{x0 - 8}" y="{sy(v) + 3:.2f}" text-anchor="end" '
                         f'font-family="sans-serif" font-size="10">{label}</text>')
        coords = " ".join(f"{sx(a):.2f},{sy(b):.2f}" for a, b in zip(xs, ys))
        parts.append(f'<polyline fill="none" stroke="#1f77b4" stroke-width="1.5" points="{coords}"/>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def write_svg(path: Path, svg: str):
    path.write_bytes(svg.encode("utf-8"))
