"""Deterministic SVG plots of f, its miniature, the heaved lift and its envelopes."""

from __future__ import annotations

from fractions import Fraction

from .heave import heave_decomposition
from .patterns import Pattern
from .plmap import p_linear_map
from .rotation import flat_spots, pour_lower, pour_upper

SIZE = 800
MARGIN = 60
WHICH = ("f", "g", "F", "Fl", "Fu")


def _num(v: float) -> str:
    return f"{v:.3f}"


class _Canvas:
    def __init__(self, x0, x1, y0, y1):
        self.x0, self.x1, self.y0, self.y1 = x0, x1, y0, y1
        self.items: list[str] = []

    def px(self, x) -> float:
        return MARGIN + (float(x) - self.x0) / (self.x1 - self.x0) * (SIZE - 2 * MARGIN)

    def py(self, y) -> float:
        return SIZE - MARGIN - (float(y) - self.y0) / (self.y1 - self.y0) * (SIZE - 2 * MARGIN)

    def polyline(self, pts, **attrs):
        coords = " ".join(f"{_num(self.px(x))},{_num(self.py(y))}" for x, y in pts)
        extra = "".join(f' {k.replace("_", "-")}="{v}"' for k, v in attrs.items())
        self.items.append(f'<polyline points="{coords}" fill="none"{extra}/>')

    def vline(self, x, **attrs):
        self.polyline([(x, self.y0), (x, self.y1)], **attrs)

    def text(self, x, y, s, size=16):
        self.items.append(
            f'<text x="{_num(self.px(x))}" y="{_num(self.py(y))}" font-size="{size}" '
            f'font-family="monospace">{s}</text>'
        )

    def rect(self, xa, xb, **attrs):
        a, b = self.px(xa), self.px(xb)
        top, bottom = self.py(self.y1), self.py(self.y0)
        extra = "".join(f' {k.replace("_", "-")}="{v}"' for k, v in attrs.items())
        self.items.append(
            f'<rect x="{_num(a)}" y="{_num(top)}" width="{_num(b - a)}" height="{_num(bottom - top)}"{extra}/>'
        )

    def svg(self, title: str) -> str:
        frame = (
            f'<rect x="{MARGIN}" y="{MARGIN}" width="{SIZE - 2 * MARGIN}" '
            f'height="{SIZE - 2 * MARGIN}" fill="none" stroke="#444"/>'
        )
        head = (
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" '
            f'viewBox="0 0 {SIZE} {SIZE}">'
        )
        label = f'<text x="{MARGIN}" y="{MARGIN - 20}" font-size="18" font-family="monospace">{title}</text>'
        return "\n".join([head, '<rect width="100%" height="100%" fill="white"/>', frame, label, *self.items, "</svg>"]) + "\n"


def render_svg(P: Pattern, which: str) -> str:
    """SVG text for one of the graphs f, g, F, Fl, Fu of the pattern's map."""
    if which not in WHICH:
        raise ValueError(f"which must be one of {', '.join(WHICH)}")
    f = p_linear_map(P)
    title = f"{P.cycle_notation(' ')}  {which}"
    if which == "f":
        c = _Canvas(0, 1, 0, 1)
        c.polyline([(0, 0), (1, 1)], stroke="#bbb", stroke_dasharray="4 4")
        c.polyline(f.nodes, stroke="black", stroke_width="2")
        return c.svg(title)
    if which == "g":
        g = heave_decomposition(f).g
        c = _Canvas(0, 0.5, 0, 0.5)
        c.polyline([(0, 0), (Fraction(1, 2), Fraction(1, 2))], stroke="#bbb", stroke_dasharray="4 4")
        c.polyline(g.nodes, stroke="black", stroke_width="2")
        return c.svg(title)

    dec = heave_decomposition(f)
    F = dec.lift
    curves = {"F": F, "Fl": pour_lower(F), "Fu": pour_upper(F)}
    G = curves[which]
    ys = list(F.ys) + list(G.ys)
    lo, hi = float(min(ys)), float(max(ys))
    pad = 0.05 * (hi - lo or 1)
    c = _Canvas(0, 1, lo - pad, hi + pad)
    if which == "F":
        # all four pieces are labelled, including any of zero width
        bounds = dec.boundaries
        for name, a, b in zip("gpqr", bounds, bounds[1:]):
            c.text((a + b) / 2, hi, name)
        for x in sorted(set(dec.boundaries[1:-1])):
            c.vline(x, stroke="#888", stroke_dasharray="6 4")
    else:
        for s in flat_spots(G):
            c.rect(s.lo, min(s.hi, 1), fill="#cde", stroke="none")
            if s.hi > 1:
                c.rect(0, s.hi - 1, fill="#cde", stroke="none")
        c.polyline(F.fundamental.nodes, stroke="#999", stroke_dasharray="3 3")
    c.polyline(G.fundamental.nodes, stroke="black", stroke_width="2")
    return c.svg(title)
