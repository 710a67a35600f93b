"""Continuous piecewise-linear maps with exact rational nodes."""

from __future__ import annotations

from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from ._rational import as_fraction, fmt
from .patterns import Pattern, PatternError


class DomainError(ValueError):
    """Point or image outside the domain of a map."""


@dataclass(frozen=True)
class RationalInterval:
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        object.__setattr__(self, "lo", as_fraction(self.lo))
        object.__setattr__(self, "hi", as_fraction(self.hi))
        if self.lo > self.hi:
            raise ValueError("interval with lo > hi")

    def __contains__(self, x) -> bool:
        return self.lo <= x <= self.hi

    @property
    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def to_json(self):
        return [fmt(self.lo), fmt(self.hi)]


class PLMap:
    """Continuous map given by nodes (x_i, y_i), linear in between.

    Equality is functional: maps with redundant collinear nodes compare equal
    to their simplified form.
    """

    __slots__ = ("xs", "ys", "_key")

    def __init__(self, nodes):
        pts = [(as_fraction(x), as_fraction(y)) for x, y in nodes]
        if len(pts) < 2:
            raise ValueError("a PL map needs at least two nodes")
        for (x0, _), (x1, _) in zip(pts, pts[1:]):
            if not x0 < x1:
                raise ValueError("node abscissae must be strictly increasing")
        self.xs = tuple(p[0] for p in pts)
        self.ys = tuple(p[1] for p in pts)
        self._key = None

    @property
    def nodes(self):
        return list(zip(self.xs, self.ys))

    @property
    def domain(self) -> tuple[Fraction, Fraction]:
        return self.xs[0], self.xs[-1]

    def __len__(self):
        return len(self.xs)

    def __repr__(self):
        inner = ", ".join(f"({fmt(x)}, {fmt(y)})" for x, y in self.nodes)
        return f"PLMap([{inner}])"

    def _simple_key(self):
        if self._key is None:
            s = simplify(self)
            self._key = (s.xs, s.ys)
        return self._key

    def __eq__(self, other):
        if not isinstance(other, PLMap):
            return NotImplemented
        return self._simple_key() == other._simple_key()

    def __hash__(self):
        return hash(self._simple_key())

    def slope(self, i: int) -> Fraction:
        return (self.ys[i + 1] - self.ys[i]) / (self.xs[i + 1] - self.xs[i])

    def piece_index(self, x) -> int:
        """Index i of a piece [x_i, x_{i+1}] containing x (the leftmost one at nodes)."""
        i = bisect_left(self.xs, x) - 1
        return min(max(i, 0), len(self.xs) - 2)

    def __call__(self, x):
        x = as_fraction(x)
        lo, hi = self.domain
        if not lo <= x <= hi:
            raise DomainError(f"{fmt(x)} outside [{fmt(lo)}, {fmt(hi)}]")
        i = bisect_left(self.xs, x)
        if i < len(self.xs) and self.xs[i] == x:
            return self.ys[i]
        x0, x1 = self.xs[i - 1], self.xs[i]
        y0, y1 = self.ys[i - 1], self.ys[i]
        return y0 + (y1 - y0) * (x - x0) / (x1 - x0)

    def min_value(self) -> Fraction:
        return min(self.ys)

    def max_value(self) -> Fraction:
        return max(self.ys)

    def is_nondecreasing(self) -> bool:
        return all(a <= b for a, b in zip(self.ys, self.ys[1:]))

    def restrict(self, a, b) -> "PLMap":
        a, b = as_fraction(a), as_fraction(b)
        lo, hi = self.domain
        if not lo <= a < b <= hi:
            raise DomainError("restriction outside the domain")
        inner = [(x, y) for x, y in self.nodes if a < x < b]
        return PLMap([(a, self(a))] + inner + [(b, self(b))])

    def to_json(self):
        return [[fmt(x), fmt(y)] for x, y in self.nodes]

    @classmethod
    def from_json(cls, data) -> "PLMap":
        return cls([(as_fraction(x), as_fraction(y)) for x, y in data])


def simplify(F: PLMap) -> PLMap:
    """Drop nodes at which the map does not bend."""
    keep = [0]
    for i in range(1, len(F.xs) - 1):
        j = keep[-1]
        # collinear iff slopes (j,i) and (i,i+1) agree
        if (F.ys[i] - F.ys[j]) * (F.xs[i + 1] - F.xs[i]) != (F.ys[i + 1] - F.ys[i]) * (F.xs[i] - F.xs[j]):
            keep.append(i)
    keep.append(len(F.xs) - 1)
    return PLMap([(F.xs[i], F.ys[i]) for i in keep])


def identity(a=0, b=1) -> PLMap:
    return PLMap([(a, a), (b, b)])


def p_linear_map(P: Pattern, positions=None) -> PLMap:
    """Connect-the-dots map of a cycle.

    By default the cycle's points are spaced evenly on [0, 1]; ``positions`` may
    supply any strictly increasing rationals instead.
    """
    q = P.q
    if q < 2:
        raise PatternError("P-linear map needs period >= 2")
    if positions is None:
        xs = [Fraction(i, q - 1) for i in range(q)]
    else:
        xs = [as_fraction(v) for v in positions]
        if len(xs) != q:
            raise ValueError(f"expected {q} positions, got {len(xs)}")
    return PLMap([(xs[i], xs[P.images[i] - 1]) for i in range(q)])


def evaluate(F: PLMap, x) -> Fraction:
    return F(x)


def compose(F: PLMap, G: PLMap) -> PLMap:
    """The map x -> F(G(x)) on the domain of G."""
    lo, hi = F.domain
    if G.min_value() < lo or G.max_value() > hi:
        raise DomainError("image of the inner map escapes the outer domain")
    breaks = set(G.xs)
    fx = F.xs
    for i in range(len(G.xs) - 1):
        y0, y1 = G.ys[i], G.ys[i + 1]
        if y0 == y1:
            continue
        a, b = (y0, y1) if y0 < y1 else (y1, y0)
        x0, x1 = G.xs[i], G.xs[i + 1]
        for k in range(bisect_right(fx, a), bisect_left(fx, b)):
            breaks.add(x0 + (fx[k] - y0) * (x1 - x0) / (y1 - y0))
    xs = sorted(breaks)
    return simplify(PLMap([(x, F(G(x))) for x in xs]))


def iterate(F: PLMap, n: int) -> PLMap:
    """n-fold composite of F with itself, by repeated squaring."""
    if n < 1:
        raise ValueError("iterate needs n >= 1")
    result = None
    base = F
    while True:
        if n & 1:
            result = base if result is None else compose(result, base)
        n >>= 1
        if not n:
            return result
        base = compose(base, base)


def fixed_points(F: PLMap) -> list:
    """Solutions of F(x) = x: isolated Fractions and maximal RationalIntervals."""
    segs: list[RationalInterval] = []
    pts: list[Fraction] = []
    for i in range(len(F.xs) - 1):
        x0, x1 = F.xs[i], F.xs[i + 1]
        d0, d1 = F.ys[i] - x0, F.ys[i + 1] - x1
        if d0 == 0 and d1 == 0:
            if segs and segs[-1].hi == x0:
                segs[-1] = RationalInterval(segs[-1].lo, x1)
            else:
                segs.append(RationalInterval(x0, x1))
        elif d0 == 0:
            pts.append(x0)
        elif d1 == 0:
            pts.append(x1)
        elif (d0 < 0) != (d1 < 0):
            pts.append(x0 + d0 * (x1 - x0) / (d0 - d1))
    pts = sorted(set(p for p in pts if not any(p in s for s in segs)))
    out: list = pts + segs
    out.sort(key=lambda v: v if isinstance(v, Fraction) else v.lo)
    return out


@dataclass(frozen=True)
class Extrema:
    argmax: Fraction
    max: Fraction
    max_unique: bool
    argmin: Fraction
    min: Fraction
    min_unique: bool


def extrema(F: PLMap) -> Extrema:
    hi, lo = F.max_value(), F.min_value()
    at_hi = [x for x, y in F.nodes if y == hi]
    at_lo = [x for x, y in F.nodes if y == lo]
    return Extrema(at_hi[0], hi, len(at_hi) == 1, at_lo[0], lo, len(at_lo) == 1)


# -- periodic orbits ------------------------------------------------------------

@dataclass(frozen=True)
class PeriodicOrbit:
    """An orbit listed in dynamical order, starting from its leftmost point."""

    points: tuple
    period: int
    isolated: bool = True

    @property
    def pattern(self) -> Pattern:
        order = sorted(self.points)
        rank = {x: i + 1 for i, x in enumerate(order)}
        k = self.period
        images = [0] * k
        for j in range(k):
            images[rank[self.points[j]] - 1] = rank[self.points[(j + 1) % k]]
        return Pattern(tuple(images))

    def to_json(self):
        return {"points": [fmt(x) for x in self.points], "period": self.period, "isolated": self.isolated}


def orbit_of(F: PLMap, x, period: int, isolated: bool = True) -> PeriodicOrbit:
    pts = [as_fraction(x)]
    for _ in range(period - 1):
        pts.append(F(pts[-1]))
    if F(pts[-1]) != pts[0]:
        raise ValueError("point does not return after the stated period")
    j = pts.index(min(pts))
    return PeriodicOrbit(tuple(pts[j:] + pts[:j]), period, isolated)


def least_period(F: PLMap, x, bound: int) -> int | None:
    """Least n <= bound with F^n(x) = x, or None."""
    y = x
    for n in range(1, bound + 1):
        y = F(y)
        if y == x:
            return n
    return None


def _divisors(k: int) -> list[int]:
    return [d for d in range(1, k) if k % d == 0]


def _segment_representative(F: PLMap, seg: RationalInterval, k: int):
    """A point of least period k inside a segment where F^k is the identity."""
    lo, hi = seg.lo, seg.hi
    tries = [seg.midpoint, lo, hi]
    for depth in range(2, 7):
        n = 1 << depth
        tries.extend(lo + (hi - lo) * Fraction(i, n) for i in range(1, n, 2))
    for x in tries:
        if least_period(F, x, k) == k:
            return x
    return None


def _periodic_orbits_generic(F: PLMap, N: int) -> list[PeriodicOrbit]:
    found: dict[frozenset, PeriodicOrbit] = {}
    for k in range(1, N + 1):
        Fk = iterate(F, k)
        for item in fixed_points(Fk):
            if isinstance(item, Fraction):
                if least_period(F, item, k) == k:
                    orb = orbit_of(F, item, k)
                    found.setdefault(frozenset(orb.points), orb)
                continue
            covered = False
            for orb in found.values():
                if orb.period == k and not orb.isolated and any(p in item for p in orb.points):
                    covered = True
                    break
            if covered:
                continue
            x = _segment_representative(F, item, k)
            if x is not None:
                orb = orbit_of(F, x, k, isolated=False)
                key = frozenset(orb.points)
                old = found.get(key)
                if old is None or old.isolated:
                    found[key] = orb
    return _sorted_orbits(found.values())


def _sorted_orbits(orbits) -> list[PeriodicOrbit]:
    return sorted(orbits, key=lambda o: (o.period, o.points))


# Fast path for Markov maps on an evenly spaced grid.  In grid units every piece
# is u -> a*u + b with integer a, b, and every cell maps onto a run of cells, so a
# periodic point off the grid is the unique fixed point of the affine composite
# along its (unique) closed walk of cells.  Orbits are produced as integer
# numerators over a common denominator, in grid units.

def _grid_form(F: PLMap):
    xs = F.xs
    n = len(xs)
    h = xs[1] - xs[0]
    if any(xs[i + 1] - xs[i] != h for i in range(n - 1)):
        return None
    us = []
    for y in F.ys:
        u = (y - xs[0]) / h
        if u.denominator != 1 or not 0 <= u < n:
            return None
        us.append(int(u))
    if any(us[i] == us[i + 1] for i in range(n - 1)):
        return None
    return xs[0], h, us


def _grid_cycles(F: PLMap, N: int, grid):
    """Periodic orbits as (numerators, denominator, isolated), grid units."""
    x0, h, us = grid
    ncell = len(us) - 1
    a = [us[c + 1] - us[c] for c in range(ncell)]
    b = [us[c] - a[c] * c for c in range(ncell)]
    succ = []
    for c in range(ncell):
        lo, hi = sorted((us[c], us[c + 1]))
        succ.append(range(lo, hi))

    out = []
    id_cells: dict[int, set] = {}

    def dfs(c0, c, A, B, walk, comps):
        ac, bc = a[c], b[c]
        A2, B2 = ac * A, ac * B + bc
        k = len(walk)
        for nxt in succ[c]:
            if nxt < c0:
                continue
            if nxt == c0:
                if A2 == 1:
                    id_cells.setdefault(k, set()).update(walk)
                else:
                    den = 1 - A2
                    sgn = 1 if den > 0 else -1
                    num0 = sgn * B2
                    den *= sgn
                    if num0 % den:
                        nums = [num0]
                        ok = True
                        for Aj, Bj in comps:
                            v = sgn * (Aj * B2 + Bj * (1 - A2))
                            if v <= num0:
                                ok = False  # not leftmost, or a repeated walk
                                break
                            nums.append(v)
                        if ok:
                            out.append((tuple(nums), den, True))
            if k < N:
                walk.append(nxt)
                comps.append((A2, B2))
                dfs(c0, nxt, A2, B2, walk, comps)
                walk.pop()
                comps.pop()

    for c0 in range(ncell):
        dfs(c0, c0, 1, 0, [c0], [])

    # identity segments of F^k: one representative per family
    reps: dict[int, list] = {}
    for k in sorted(id_cells):
        cells = sorted(id_cells[k])
        runs = []
        for c in cells:
            if runs and runs[-1][1] == c:
                runs[-1][1] = c + 1
            else:
                runs.append([c, c + 1])
        for lo, hi in runs:
            if any(lo * d <= v <= hi * d for nums, d in reps.get(k, ()) for v in nums):
                continue
            seg = RationalInterval(x0 + h * lo, x0 + h * hi)
            x = _segment_representative(F, seg, k)
            if x is None:
                continue
            orb = orbit_of(F, x, k)
            us_ = [(p - x0) / h for p in orb.points]
            d = 1
            for u in us_:
                d = d * u.denominator // gcd(d, u.denominator)
            nums = tuple(int(u * d) for u in us_)
            reps.setdefault(k, []).append((nums, d))
            out.append((nums, d, False))

    # orbits through grid points
    for start in range(ncell + 1):
        u, path = start, []
        for _ in range(N):
            path.append(u)
            u = us[u]
            if u == start:
                break
        if u != start or min(path) != start:
            continue
        k = len(path)
        cells = id_cells.get(k, ())
        if any(v in cells or v - 1 in cells for v in path):
            continue  # endpoint of an identity segment, handled above
        out.append((tuple(path), 1, True))
    return out


def _periodic_orbits_grid(F: PLMap, N: int, grid) -> list[PeriodicOrbit]:
    x0, h, _ = grid
    orbits = {}
    c0 = x0.numerator * h.denominator
    c1 = h.numerator * x0.denominator
    c2 = x0.denominator * h.denominator
    for nums, den, isolated in _grid_cycles(F, N, grid):
        pts = tuple(Fraction(c0 * den + c1 * v, c2 * den) for v in nums)
        key = frozenset(pts)
        if key not in orbits or not isolated:
            orbits[key] = PeriodicOrbit(pts, len(pts), isolated)
    return _sorted_orbits(orbits.values())


def periodic_orbits(F: PLMap, N: int, engine: str = "auto") -> list[PeriodicOrbit]:
    """All periodic orbits of least period <= N, sorted by (period, points).

    A segment on which some iterate is the identity contributes a single
    representative orbit flagged ``isolated=False``.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    lo, hi = F.domain
    if F.min_value() < lo or F.max_value() > hi:
        raise DomainError("map does not send its domain into itself")
    if engine not in ("auto", "generic", "grid"):
        raise ValueError(f"unknown engine {engine!r}")
    grid = _grid_form(F) if engine != "generic" else None
    if grid is None:
        if engine == "grid":
            raise ValueError("map is not a Markov map on an even grid")
        return _periodic_orbits_generic(F, N)
    return _periodic_orbits_grid(F, N, grid)
