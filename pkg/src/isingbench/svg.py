"""Minimal deterministic SVG plots: boxplots, histograms, line-with-band.

No plotting dependencies; output is plain XML whose bytes depend only on
the input data (floats formatted with %.6g).
"""

from __future__ import annotations

import math
from xml.sax.saxutils import escape

_W, _H = 640, 400
_ML, _MR, _MT, _MB = 64, 16, 34, 52


def _fmt(x: float) -> str:
    return f"{x:.6g}"


def _nice_ticks(lo: float, hi: float, target: int = 5) -> list[float]:
    if not math.isfinite(lo) or not math.isfinite(hi):
        return [0.0, 1.0]
    if hi <= lo:
        hi = lo + 1.0
    raw = (hi - lo) / target
    mag = 10.0 ** math.floor(math.log10(raw))
    for mult in (1.0, 2.0, 5.0, 10.0):
        if raw <= mult * mag:
            step = mult * mag
            break
    first = math.ceil(lo / step) * step
    ticks = []
    t = first
    while t <= hi + 1e-12 * step:
        ticks.append(round(t, 12))
        t += step
    return ticks or [lo, hi]


class _Canvas:
    def __init__(self, title: str, xlabel: str, ylabel: str):
        self.parts = [
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" '
            f'viewBox="0 0 {_W} {_H}">',
            f'<rect width="{_W}" height="{_H}" fill="white"/>',
            f'<text x="{_W / 2}" y="20" text-anchor="middle" font-size="14" '
            f'font-family="sans-serif">{escape(title)}</text>',
            f'<text x="{_W / 2}" y="{_H - 10}" text-anchor="middle" font-size="12" '
            f'font-family="sans-serif">{escape(xlabel)}</text>',
            f'<text x="14" y="{_H / 2}" text-anchor="middle" font-size="12" '
            f'font-family="sans-serif" transform="rotate(-90 14 {_H / 2})">'
            f"{escape(ylabel)}</text>",
        ]
        self.x0, self.x1 = _ML, _W - _MR
        self.y0, self.y1 = _H - _MB, _MT

    def x_of(self, v, lo, hi):
        return self.x0 + (self.x1 - self.x0) * (v - lo) / (hi - lo)

    def y_of(self, v, lo, hi):
        return self.y0 + (self.y1 - self.y0) * (v - lo) / (hi - lo)

    def add(self, element: str) -> None:
        self.parts.append(element)

    def axes(self, xlo, xhi, ylo, yhi, x_ticks=True):
        self.add(
            f'<line x1="{self.x0}" y1="{self.y0}" x2="{self.x1}" y2="{self.y0}" '
            'stroke="black"/>'
        )
        self.add(
            f'<line x1="{self.x0}" y1="{self.y0}" x2="{self.x0}" y2="{self.y1}" '
            'stroke="black"/>'
        )
        for t in _nice_ticks(ylo, yhi):
            y = self.y_of(t, ylo, yhi)
            self.add(
                f'<line x1="{self.x0 - 4}" y1="{_fmt(y)}" x2="{self.x0}" y2="{_fmt(y)}" '
                'stroke="black"/>'
            )
            self.add(
                f'<text x="{self.x0 - 8}" y="{_fmt(y + 4)}" text-anchor="end" '
                f'font-size="11" font-family="sans-serif">{_fmt(t)}</text>'
            )
        if x_ticks:
            for t in _nice_ticks(xlo, xhi):
                x = self.x_of(t, xlo, xhi)
                self.add(
                    f'<line x1="{_fmt(x)}" y1="{self.y0}" x2="{_fmt(x)}" '
                    f'y2="{self.y0 + 4}" stroke="black"/>'
                )
                self.add(
                    f'<text x="{_fmt(x)}" y="{self.y0 + 18}" text-anchor="middle" '
                    f'font-size="11" font-family="sans-serif">{_fmt(t)}</text>'
                )

    def render(self) -> str:
        return "\n".join(self.parts + ["</svg>"]) + "\n"


def boxplot_svg(groups, title: str, ylabel: str) -> str:
    """groups: list of (label, stats) with stats exposing min/q1/median/q3/max."""
    if not groups:
        raise ValueError("no groups to plot")
    ylo = min(s.min for _, s in groups)
    yhi = max(s.max for _, s in groups)
    if yhi <= ylo:
        ylo, yhi = ylo - 0.5, yhi + 0.5
    pad = 0.05 * (yhi - ylo)
    ylo, yhi = ylo - pad, yhi + pad
    c = _Canvas(title, "", ylabel)
    c.axes(0, 1, ylo, yhi, x_ticks=False)
    slot = (c.x1 - c.x0) / len(groups)
    half = min(28.0, slot * 0.3)
    for k, (label, s) in enumerate(groups):
        cx = c.x0 + slot * (k + 0.5)
        y = {v: c.y_of(getattr(s, v), ylo, yhi) for v in ("min", "q1", "median", "q3", "max")}
        c.add(
            f'<line x1="{_fmt(cx)}" y1="{_fmt(y["min"])}" x2="{_fmt(cx)}" '
            f'y2="{_fmt(y["max"])}" stroke="black"/>'
        )
        for whisker in ("min", "max"):
            c.add(
                f'<line x1="{_fmt(cx - half / 2)}" y1="{_fmt(y[whisker])}" '
                f'x2="{_fmt(cx + half / 2)}" y2="{_fmt(y[whisker])}" stroke="black"/>'
            )
        c.add(
            f'<rect x="{_fmt(cx - half)}" y="{_fmt(y["q3"])}" width="{_fmt(2 * half)}" '
            f'height="{_fmt(y["q1"] - y["q3"])}" fill="#9ecae1" stroke="black"/>'
        )
        c.add(
            f'<line x1="{_fmt(cx - half)}" y1="{_fmt(y["median"])}" '
            f'x2="{_fmt(cx + half)}" y2="{_fmt(y["median"])}" stroke="black" '
            'stroke-width="2"/>'
        )
        c.add(
            f'<text x="{_fmt(cx)}" y="{c.y0 + 18}" text-anchor="middle" font-size="11" '
            f'font-family="sans-serif">{escape(str(label))}</text>'
        )
    return c.render()


def histogram_svg(bin_edges, counts, title: str, xlabel: str) -> str:
    if len(bin_edges) != len(counts) + 1:
        raise ValueError("need len(bin_edges) == len(counts) + 1")
    xlo, xhi = float(bin_edges[0]), float(bin_edges[-1])
    if xhi <= xlo:
        xlo, xhi = xlo - 0.5, xhi + 0.5
    yhi = max(1.0, float(max(counts)))
    c = _Canvas(title, xlabel, "count")
    c.axes(xlo, xhi, 0.0, yhi)
    for k, count in enumerate(counts):
        if count <= 0:
            continue
        x_left = c.x_of(float(bin_edges[k]), xlo, xhi)
        x_right = c.x_of(float(bin_edges[k + 1]), xlo, xhi)
        y_top = c.y_of(float(count), 0.0, yhi)
        c.add(
            f'<rect x="{_fmt(x_left)}" y="{_fmt(y_top)}" '
            f'width="{_fmt(max(x_right - x_left, 0.5))}" '
            f'height="{_fmt(c.y0 - y_top)}" fill="#fdae6b" stroke="black" '
            'stroke-width="0.5"/>'
        )
    return c.render()


def _polyline(c, xs, ys, xlo, xhi, ylo, yhi, color, width=1.5, dash=""):
    pts = " ".join(
        f"{_fmt(c.x_of(x, xlo, xhi))},{_fmt(c.y_of(y, ylo, yhi))}" for x, y in zip(xs, ys)
    )
    extra = f' stroke-dasharray="{dash}"' if dash else ""
    c.add(
        f'<polyline points="{pts}" fill="none" stroke="{color}" '
        f'stroke-width="{width}"{extra}/>'
    )


def line_band_svg(xs, means, q1s, q3s, title: str, xlabel: str, ylabel: str) -> str:
    """Mean line with a first-to-third-quartile band."""
    if not (len(xs) == len(means) == len(q1s) == len(q3s)) or not xs:
        raise ValueError("xs, means, q1s, q3s must be equal-length and nonempty")
    xlo, xhi = min(xs), max(xs)
    if xhi <= xlo:
        xlo, xhi = xlo - 0.5, xhi + 0.5
    ylo = min(min(q1s), min(means))
    yhi = max(max(q3s), max(means))
    if yhi <= ylo:
        ylo, yhi = ylo - 0.5, yhi + 0.5
    pad = 0.05 * (yhi - ylo)
    ylo, yhi = ylo - pad, yhi + pad
    c = _Canvas(title, xlabel, ylabel)
    c.axes(xlo, xhi, ylo, yhi)
    band = [(x, q3) for x, q3 in zip(xs, q3s)] + [
        (x, q1) for x, q1 in zip(reversed(xs), reversed(q1s))
    ]
    pts = " ".join(
        f"{_fmt(c.x_of(x, xlo, xhi))},{_fmt(c.y_of(y, ylo, yhi))}" for x, y in band
    )
    c.add(f'<polygon points="{pts}" fill="#c6dbef" stroke="none"/>')
    _polyline(c, xs, means, xlo, xhi, ylo, yhi, "#08519c", 2.0)
    return c.render()


def lines_svg(xs, series, title: str, xlabel: str, ylabel: str) -> str:
    """Overlayed curves; `series` is a list of (label, ys) pairs."""
    if not series or not len(xs):
        raise ValueError("need xs and at least one series")
    xlo, xhi = min(xs), max(xs)
    if xhi <= xlo:
        xlo, xhi = xlo - 0.5, xhi + 0.5
    all_y = [y for _, ys in series for y in ys]
    ylo, yhi = min(all_y), max(all_y)
    if yhi <= ylo:
        ylo, yhi = ylo - 0.5, yhi + 0.5
    pad = 0.05 * (yhi - ylo)
    ylo, yhi = ylo - pad, yhi + pad
    c = _Canvas(title, xlabel, ylabel)
    c.axes(xlo, xhi, ylo, yhi)
    palette = ["#08519c", "#a63603", "#31a354", "#756bb1"]
    dashes = ["", "6,3", "2,2", "8,2,2,2"]
    for k, (label, ys) in enumerate(series):
        color = palette[k % len(palette)]
        _polyline(c, xs, ys, xlo, xhi, ylo, yhi, color, 1.5, dashes[k % len(dashes)])
        c.add(
            f'<text x="{c.x1 - 6}" y="{_MT + 14 * (k + 1)}" text-anchor="end" '
            f'font-size="11" font-family="sans-serif" fill="{color}">'
            f"{escape(str(label))}</text>"
        )
    return c.render()
