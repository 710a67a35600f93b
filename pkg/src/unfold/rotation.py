"""Rotation theory for degree-one lifts: water pouring, exact rotation numbers."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import floor, ceil, gcd

from ._rational import as_fraction, fmt
from .heave import DegreeOneLift
from .plmap import PLMap


class MonotoneLift(DegreeOneLift):
    """A non-decreasing degree-one lift."""

    __slots__ = ()

    def __init__(self, fundamental: PLMap):
        super().__init__(fundamental)
        if not self.fundamental.is_nondecreasing():
            raise ValueError("lift is not non-decreasing")

    @classmethod
    def of(cls, L: DegreeOneLift) -> "MonotoneLift":
        return L if isinstance(L, MonotoneLift) else cls(L.fundamental)


# -- water pouring ----------------------------------------------------------------

def _running(W: PLMap, take_min: bool, reverse: bool) -> list[tuple[Fraction, Fraction]]:
    """Running min (or max) of W swept from one end; returns nodes left to right."""
    nodes = W.nodes[::-1] if reverse else W.nodes
    better = (lambda a, b: a < b) if take_min else (lambda a, b: a > b)
    x0, m = nodes[0]
    out = [(x0, m)]
    for (xa, ya), (xb, yb) in zip(nodes, nodes[1:]):
        # here m is at least as good as ya; the envelope on this piece is
        # the better of m and W
        if better(yb, m):
            if ya != m:
                t = xa + (m - ya) * (xb - xa) / (yb - ya)
                out.append((t, m))
            out.append((xb, yb))
            m = yb
        else:
            out.append((xb, m))
    if reverse:
        out.reverse()
    return out


def pour_lower(F: DegreeOneLift) -> MonotoneLift:
    """F_l(x) = min of F over [x, x + 1]."""
    nodes = _running(F.window(0, 2), take_min=True, reverse=True)
    return MonotoneLift(PLMap([(x, y) for x, y in nodes if x <= 1]))


def pour_upper(F: DegreeOneLift) -> MonotoneLift:
    """F_u(x) = max of F over [x - 1, x]."""
    nodes = _running(F.window(-1, 1), take_min=False, reverse=False)
    return MonotoneLift(PLMap([(x, y) for x, y in nodes if x >= 0]))


def _pointwise(F: DegreeOneLift, G: DegreeOneLift, op) -> DegreeOneLift:
    xs = sorted(set(F.xs) | set(G.xs))
    pts = []
    for a, b in zip(xs, xs[1:]):
        da, db = F(a) - G(a), F(b) - G(b)
        pts.append(a)
        if (da < 0 < db) or (db < 0 < da):
            pts.append(a + da * (b - a) / (da - db))
    pts.append(xs[-1])
    return DegreeOneLift(PLMap([(x, op(F(x), G(x))) for x in pts]))


def lift_min(F: DegreeOneLift, G: DegreeOneLift) -> DegreeOneLift:
    return _pointwise(F, G, min)


def lift_max(F: DegreeOneLift, G: DegreeOneLift) -> DegreeOneLift:
    return _pointwise(F, G, max)


def sup_difference(F: DegreeOneLift, G: DegreeOneLift) -> Fraction:
    """Exact max of F - G over a period."""
    xs = set(F.xs) | set(G.xs)
    return max(F(x) - G(x) for x in xs)


def sup_distance(F: DegreeOneLift, G: DegreeOneLift) -> Fraction:
    return max(sup_difference(F, G), sup_difference(G, F))


def water_capacity(F: DegreeOneLift) -> Fraction:
    """Largest depth of water poured from below: sup (F - F_l)."""
    return sup_difference(F, pour_lower(F))


def water_family(F: DegreeOneLift, mu) -> MonotoneLift:
    """F_mu = (min(F, F_l + mu))_u, for 0 <= mu <= capacity."""
    mu = as_fraction(mu)
    Fl = pour_lower(F)
    cap = sup_difference(F, Fl)
    if not 0 <= mu <= cap:
        raise ValueError(f"mu must lie in [0, {fmt(cap)}]")
    return pour_upper(lift_min(F, Fl + mu))


# -- flat spots ---------------------------------------------------------------------

@dataclass(frozen=True)
class FlatSpot:
    """Maximal open interval (lo, hi) on which a lift is constant; hi may exceed 1."""

    lo: Fraction
    hi: Fraction
    value: Fraction

    def __contains__(self, x) -> bool:
        x = as_fraction(x)
        k = floor(x - self.lo)
        t = x - k
        return self.lo < t < self.hi

    def in_closure(self, x) -> bool:
        x = as_fraction(x)
        t = x - floor(x - self.lo)
        return self.lo <= t <= self.hi

    def to_json(self):
        return {"lo": fmt(self.lo), "hi": fmt(self.hi), "value": fmt(self.value)}


def flat_spots(G: DegreeOneLift) -> list[FlatSpot]:
    xs, ys = G.xs, G.ys
    spots = []
    for i in range(len(xs) - 1):
        if ys[i] == ys[i + 1]:
            if spots and spots[-1][1] == xs[i]:
                spots[-1][1] = xs[i + 1]
            else:
                spots.append([xs[i], xs[i + 1], ys[i]])
    # a spot ending at 1 continues into the next period if one starts at 0
    if len(spots) >= 2 and spots[-1][1] == 1 and spots[0][0] == 0:
        first = spots.pop(0)
        spots[-1][1] = 1 + first[1]
    return [FlatSpot(a, b, v) for a, b, v in spots]


# -- rotation numbers ---------------------------------------------------------------

@dataclass(frozen=True)
class Exact:
    value: Fraction

    @property
    def lo(self) -> Fraction:
        return self.value

    @property
    def hi(self) -> Fraction:
        return self.value

    def to_json(self):
        return {"exact": fmt(self.value)}

    def __str__(self):
        return fmt(self.value)


@dataclass(frozen=True)
class Bracket:
    """The rotation number lies strictly between lo and hi."""

    lo: Fraction
    hi: Fraction

    def to_json(self):
        return {"bracket": [fmt(self.lo), fmt(self.hi)]}

    def __str__(self):
        return f"({fmt(self.lo)}, {fmt(self.hi)})"


RotationResult = Exact | Bracket


def _breakpoints_of_power(G: DegreeOneLift, q: int):
    """Points of [0, 1) where G^q may bend: preimages of nodes, level by level."""
    base = {x % 1 for x in G.xs}
    level = set(base)
    seen = set(base)
    xs, ys = G.xs, G.ys
    for _ in range(q - 1):
        nxt = set()
        for y in level:
            for i in range(len(xs) - 1):
                y0, y1 = ys[i], ys[i + 1]
                if y0 == y1:
                    continue
                for k in range(ceil(y0 - y), floor(y1 - y) + 1):
                    t = y + k
                    if y0 <= t <= y1:
                        nxt.add((xs[i] + (t - y0) * (xs[i + 1] - xs[i]) / (y1 - y0)) % 1)
        level = nxt - seen
        seen |= nxt
        if not level:
            break
    return seen


class _Powers:
    """Cache of G^n, built from sums of already known exponents."""

    def __init__(self, G: DegreeOneLift, node_cap: int):
        self.G = G
        self.cache = {1: G}
        self.node_cap = node_cap

    def spread(self, p: int, q: int) -> tuple[Fraction, Fraction]:
        """(min, max) of G^q(x) - x - p over a period."""
        Gq = self._get(q)
        if Gq is not None:
            vals = [y - x for x, y in Gq.fundamental.nodes]
        else:
            G = self.G
            vals = []
            for x in _breakpoints_of_power(G, q):
                y = x
                for _ in range(q):
                    y = G(y)
                vals.append(y - x)
        return min(vals) - p, max(vals) - p

    def _get(self, q: int):
        if q in self.cache:
            return self.cache[q]
        # split into two cached exponents when possible, else binary powering
        for a in sorted(self.cache, reverse=True):
            b = q - a
            if b in self.cache and self.cache[a] is not None and self.cache[b] is not None:
                if len(self.cache[a].xs) + len(self.cache[b].xs) > self.node_cap:
                    self.cache[q] = None
                    return None
                res = self.cache[a].compose(self.cache[b])
                self.cache[q] = res
                return res
        est = q * len(self.G.xs)
        if est > self.node_cap:
            self.cache[q] = None
            return None
        res = self.G.power(q)
        self.cache[q] = res
        return res


def rotation_number(G: DegreeOneLift, max_den: int = 64, node_cap: int = 10**5) -> RotationResult:
    """Rotation number of a non-decreasing lift by Stern-Brocot descent.

    Each candidate p/q is decided exactly from the sign of G^q(x) - x - p over
    a period.  Returns Exact when a candidate with q <= max_den is certified,
    otherwise the last Farey bracket.
    """
    if max_den < 1:
        raise ValueError("max_den must be >= 1")
    if not G.is_nondecreasing():
        raise ValueError("rotation number needs a non-decreasing lift")
    pw = _Powers(G, node_cap)

    def test(p, q):
        lo, hi = pw.spread(p, q)
        if hi < 0:
            return -1
        if lo > 0:
            return 1
        return 0

    d = [y - x for x, y in G.fundamental.nodes]
    a = floor(min(d))
    b = ceil(max(d))
    for n in range(a, b + 1):
        s = test(n, 1)
        if s == 0:
            return Exact(Fraction(n))
        if s < 0:
            b = n
            break
        a = n
    # a < rho < a + 1
    lp, lq, rp, rq = a, 1, a + 1, 1
    while lq + rq <= max_den:
        mp, mq = lp + rp, lq + rq
        s = test(mp, mq)
        if s == 0:
            return Exact(Fraction(mp, mq))
        if s < 0:
            rp, rq = mp, mq
        else:
            lp, lq = mp, mq
    return Bracket(Fraction(lp, lq), Fraction(rp, rq))


def rotation_set(F: DegreeOneLift, max_den: int = 64) -> tuple[RotationResult, RotationResult]:
    """Endpoints of the rotation interval: rotation numbers of F_l and F_u."""
    return rotation_number(pour_lower(F), max_den), rotation_number(pour_upper(F), max_den)


# -- cycles of a monotone lift ------------------------------------------------------

@dataclass(frozen=True)
class LiftedCycle:
    """x, G(x), ..., G^{q-1}(x) with G^q(x) = x + p."""

    points: tuple
    p: int
    q: int
    touches_flat: bool

    def to_json(self):
        return {
            "points": [fmt(x) for x in self.points],
            "p": self.p,
            "q": self.q,
            "touches_flat": self.touches_flat,
        }


def cycle_solutions(G: DegreeOneLift, p: int, q: int) -> list[Fraction]:
    """Candidates in [0, 1) with G^q(x) = x + p: isolated zeros, plus left
    endpoints and midpoints of zero segments."""
    H = G.power(q)
    xs, ys = H.xs, H.ys
    h = [y - x - p for x, y in zip(xs, ys)]
    out = set()
    for i in range(len(xs) - 1):
        a, b = h[i], h[i + 1]
        if a == 0 and b == 0:
            out.add(xs[i])
            out.add((xs[i] + xs[i + 1]) / 2)
        elif a == 0:
            out.add(xs[i])
        elif b == 0:
            out.add(xs[i + 1])
        elif (a < 0) != (b < 0):
            out.add(xs[i] + a * (xs[i + 1] - xs[i]) / (a - b))
    return sorted({x % 1 for x in out})


def find_cycle(G: DegreeOneLift, p: int, q: int, prefer_off_flat: bool = True) -> LiftedCycle:
    """A lifted cycle with rotation pair (p, q).

    By default an orbit avoiding the closures of all flat spots is preferred;
    if every solution touches one, the smallest solution is returned flagged.
    """
    if q < 1 or gcd(p, q) != 1:
        raise ValueError("p/q must be in lowest terms with q >= 1")
    rho = rotation_number(G, max_den=max(q, 1))
    if not (isinstance(rho, Exact) and rho.value == Fraction(p, q)):
        raise ValueError(f"rotation number is {rho}, not {p}/{q}")
    spots = flat_spots(G)

    def orbit(x):
        pts = [x]
        for _ in range(q - 1):
            pts.append(G(pts[-1]))
        return tuple(pts)

    def touches(pts):
        return any(s.in_closure(x) for s in spots for x in pts)

    sols = cycle_solutions(G, p, q)
    if not sols:
        raise RuntimeError("certified rotation number but no solution found")
    if prefer_off_flat:
        for x in sols:
            pts = orbit(x)
            if not touches(pts):
                return LiftedCycle(pts, p, q, False)
    pts = orbit(sols[0])
    return LiftedCycle(pts, p, q, touches(pts))
