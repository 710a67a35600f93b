"""Degree-one lifts and the heaved lift of an interval map on [0, 1]."""

from __future__ import annotations

from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from fractions import Fraction
from math import floor

from ._rational import as_fraction, fmt
from .plmap import PLMap, extrema, simplify

HALF = Fraction(1, 2)


class HeaveError(ValueError):
    """The map does not qualify for heaving."""


class DegreeOneLift:
    """A map of the line with F(x + 1) = F(x) + 1, stored on [0, 1]."""

    __slots__ = ("fundamental",)

    def __init__(self, fundamental: PLMap):
        if fundamental.domain != (0, 1):
            raise HeaveError("fundamental domain must be [0, 1]")
        if fundamental.ys[-1] != fundamental.ys[0] + 1:
            raise HeaveError("not degree one: F(1) != F(0) + 1")
        self.fundamental = simplify(fundamental)

    @classmethod
    def from_nodes(cls, nodes) -> "DegreeOneLift":
        return cls(PLMap(nodes))

    @classmethod
    def translation(cls, c) -> "DegreeOneLift":
        c = as_fraction(c)
        return cls(PLMap([(0, c), (1, c + 1)]))

    @property
    def xs(self):
        return self.fundamental.xs

    @property
    def ys(self):
        return self.fundamental.ys

    def __call__(self, x):
        x = as_fraction(x)
        k = floor(x)
        return self.fundamental(x - k) + k

    def __eq__(self, other):
        if not isinstance(other, DegreeOneLift):
            return NotImplemented
        return self.fundamental == other.fundamental

    def __hash__(self):
        return hash(self.fundamental)

    def __repr__(self):
        return f"DegreeOneLift({self.fundamental!r})"

    def __add__(self, c):
        c = as_fraction(c)
        return DegreeOneLift(PLMap([(x, y + c) for x, y in self.fundamental.nodes]))

    def __sub__(self, c):
        return self + (-as_fraction(c))

    def is_nondecreasing(self) -> bool:
        return self.fundamental.is_nondecreasing()

    def breakpoints(self, a, b) -> list[Fraction]:
        """Node abscissae of the extended map lying in [a, b]."""
        xs = self.xs[:-1]
        out = []
        for k in range(floor(a) - 1, floor(b) + 1):
            for x in xs:
                t = x + k
                if a <= t <= b:
                    out.append(t)
        return out

    def window(self, a: int, b: int) -> PLMap:
        """The extended map as a PLMap on the integer window [a, b]."""
        nodes = []
        for k in range(a, b):
            for x, y in self.fundamental.nodes[:-1]:
                nodes.append((x + k, y + k))
        nodes.append((Fraction(b), self.ys[-1] + b - 1))
        return PLMap(nodes)

    def compose(self, inner: "DegreeOneLift") -> "DegreeOneLift":
        """The lift x -> self(inner(x))."""
        breaks = set(inner.xs)
        for i in range(len(inner.xs) - 1):
            y0, y1 = inner.ys[i], inner.ys[i + 1]
            if y0 == y1:
                continue
            lo, hi = (y0, y1) if y0 < y1 else (y1, y0)
            x0, x1 = inner.xs[i], inner.xs[i + 1]
            for t in self.breakpoints(lo, hi):
                if lo < t < hi:
                    breaks.add(x0 + (t - y0) * (x1 - x0) / (y1 - y0))
        return DegreeOneLift(PLMap([(x, self(inner(x))) for x in sorted(breaks)]))

    def power(self, n: int) -> "DegreeOneLift":
        if n < 0:
            raise ValueError("negative power")
        result = DegreeOneLift(PLMap([(0, 0), (1, 1)]))
        base = self
        while n:
            if n & 1:
                result = result.compose(base)
            n >>= 1
            if n:
                base = base.compose(base)
        return result

    def to_json(self):
        return self.fundamental.to_json()


def lift_eval(L: DegreeOneLift, x) -> Fraction:
    return L(x)


def lift_orbit(L: DegreeOneLift, x, n: int) -> list[Fraction]:
    """[x, L(x), ..., L^n(x)]."""
    out = [as_fraction(x)]
    for _ in range(n):
        out.append(L(out[-1]))
    return out


def miniature(f: PLMap) -> PLMap:
    """g(x) = f(2x)/2 on [0, 1/2]."""
    if f.domain != (0, 1):
        raise HeaveError("miniature model needs a map on [0, 1]")
    if f.min_value() < 0 or f.max_value() > 1:
        raise HeaveError("map does not send [0, 1] into itself")
    return PLMap([(x / 2, y / 2) for x, y in f.nodes])


@dataclass(frozen=True)
class HeaveDecomposition:
    g: PLMap
    M_g: Fraction
    m_g: Fraction
    c_g: Fraction
    d_g: Fraction
    lift: DegreeOneLift

    @property
    def boundaries(self) -> tuple[Fraction, Fraction, Fraction, Fraction, Fraction]:
        return (Fraction(0), self.M_g, HALF, 1 - self.m_g, Fraction(1))

    def piece(self, name: str, x) -> Fraction:
        """Evaluate one of the four pieces ``g``, ``p``, ``q``, ``r`` at x."""
        g = self.g
        x = as_fraction(x)
        if name == "g":
            return g(x)
        if name == "p":
            return 1 - g(x)
        if name == "q":
            return 1 - g(1 - x)
        if name == "r":
            return 1 + g(1 - x)
        raise KeyError(name)

    def pieces(self) -> list[tuple[str, Fraction, Fraction]]:
        """Non-degenerate (name, start, end) pieces, left to right."""
        b = self.boundaries
        names = "gpqr"
        return [(names[i], b[i], b[i + 1]) for i in range(4) if b[i] < b[i + 1]]


def heave_decomposition(f: PLMap) -> HeaveDecomposition:
    ext = extrema(f)
    if not (ext.max_unique and ext.min_unique):
        raise HeaveError("absolute extrema must be attained at a single point each")
    if ext.max != 1 or ext.min != 0:
        raise HeaveError("extremal values must be 0 and 1")
    g = miniature(f)
    M_g, m_g = ext.argmax / 2, ext.argmin / 2
    dec = HeaveDecomposition(g, M_g, m_g, g(0), g(HALF), None)
    xs = set(dec.boundaries)
    xs.update(x for x in g.xs if x <= HALF)
    xs.update(1 - x for x in g.xs)
    nodes = []
    for x in sorted(xs):
        if x <= M_g:
            y = dec.piece("g", x)
        elif x <= HALF:
            y = dec.piece("p", x)
        elif x <= 1 - m_g:
            y = dec.piece("q", x)
        else:
            y = dec.piece("r", x)
        nodes.append((x, y))
    lift = DegreeOneLift(PLMap(nodes))
    object.__setattr__(dec, "lift", lift)
    return dec


def heaved(f: PLMap) -> DegreeOneLift:
    """The heaved degree-one lift of an interval map on [0, 1].

    Requires a unique absolute maximum with value 1 and a unique absolute
    minimum with value 0 (always true for maps built from a cycle).
    """
    return heave_decomposition(f).lift


def lift_to_json(L: DegreeOneLift):
    return [[fmt(x), fmt(y)] for x, y in L.fundamental.nodes]
