"""Unfolding numbers of points and cycles, unfolding intervals and reports."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil

from ._rational import as_fraction, fmt
from .heave import DegreeOneLift, heaved
from .patterns import (
    ModifiedPair,
    Pattern,
    PatternError,
    UnfoldingPair,
    is_divergent,
    is_sheer,
    modality,
    modified_pair,
    mup_json,
    over_rotation_pair,
    unfolding_pair,
)
from .plmap import PLMap, PeriodicOrbit, extrema, least_period, p_linear_map, periodic_orbits
from .rotation import Exact, RotationResult, find_cycle, pour_lower, pour_upper, rotation_number

HALF = Fraction(1, 2)


class RouteMismatch(RuntimeError):
    """The two unfolding-number computations disagree."""


def unfolding_number_via_heave(P: Pattern) -> UnfoldingPair:
    """Unfolding pair read off the heaved orbit of the leftmost point."""
    if P.q < 2:
        raise PatternError("unfolding pair needs period >= 2")
    L = heaved(p_linear_map(P))
    y = Fraction(0)
    for _ in range(P.q):
        y = L(y)
    if y.denominator != 1:
        raise RuntimeError(f"heaved orbit of 0 did not close: F^q(0) = {fmt(y)}")
    return UnfoldingPair(int(y), P.q)


def fold(z) -> Fraction:
    """Project a point of the line to [0, 1] through the heave: z -> 2 dist(z, Z)."""
    z = as_fraction(z)
    t = z - (z.numerator // z.denominator)
    return 2 * t if t <= HALF else 2 * (1 - t)


def cycle_unfolding_pair(f: PLMap, x, period: int, lift: DegreeOneLift | None = None) -> UnfoldingPair:
    """Unfolding pair (p, m) of a periodic point x of f with the given period.

    m is the period, or twice the period when the heaved orbit of x/2 comes back
    on the mirrored copy of x after one period.
    """
    L = lift if lift is not None else heaved(f)
    n = period
    y = as_fraction(x) / 2
    z = y
    for _ in range(n):
        z = L(z)
    d = z - y
    if d.denominator == 1:
        return UnfoldingPair(int(d), n)
    w = z
    for _ in range(n):
        w = L(w)
    d2 = w - z
    if d2.denominator == 1:
        return UnfoldingPair(int(d2), n)
    d3 = w - y
    if d3.denominator != 1:
        raise RuntimeError("point is not periodic under the heaved lift")
    return UnfoldingPair(int(d3), 2 * n)


def orbit_unfolding_pair(f: PLMap, orbit: PeriodicOrbit, lift: DegreeOneLift | None = None) -> UnfoldingPair:
    return cycle_unfolding_pair(f, orbit.points[0], orbit.period, lift)


# -- unfolding interval ------------------------------------------------------------

@dataclass(frozen=True)
class UnfoldingInterval:
    """[u_f, upper]; upper is certified equal to 1/2 when the maximum of f lies
    left of its minimum.  Otherwise the computed value is kept as is."""

    u_f: RotationResult
    upper: RotationResult
    certified: bool = True

    def contains(self, t) -> bool:
        """Certain membership; with a bracketed u_f only values at or above the
        bracket's upper end qualify."""
        t = as_fraction(t)
        if t > self.upper.hi:
            return False
        if isinstance(self.u_f, Exact):
            return t >= self.u_f.value
        return t >= self.u_f.hi

    def consistent(self, t) -> bool:
        """t is not excluded by the computed bounds."""
        t = as_fraction(t)
        return self.u_f.lo <= t <= self.upper.hi

    def endpoints(self) -> list[str]:
        return [str(self.u_f), str(self.upper)]

    def to_json(self):
        return {"u_f": self.u_f.to_json(), "upper": self.upper.to_json(), "certified": self.certified}


def unfolding_interval(f: PLMap, max_den: int = 64) -> UnfoldingInterval:
    """Rotation interval of the heaved lift: [rho(F_l), rho(F_u)].

    With the maximum of f left of its minimum the upper end must be 1/2, and
    anything else raises.  With the maximum on the right the heave is still
    defined but its upper end is typically below 1/2; that value is reported
    with ``certified=False``.
    """
    F = heaved(f)
    lower = rotation_number(pour_lower(F), max_den)
    upper = rotation_number(pour_upper(F), max_den)
    ext = extrema(f)
    ordered = ext.argmax < ext.argmin
    if ordered and upper != Exact(HALF):
        raise RuntimeError(f"upper envelope rotates at {upper}, expected 1/2")
    return UnfoldingInterval(lower, upper, upper == Exact(HALF))


def mup_set(f: PLMap, N: int) -> set[ModifiedPair]:
    """Modified unfolding pairs of all periodic orbits of f of period <= N."""
    if N < 1:
        raise ValueError("N must be >= 1")
    L = heaved(f)
    out = set()
    for orb in periodic_orbits(f, N):
        up = orbit_unfolding_pair(f, orb, L)
        out.add(modified_pair(up.p, up.q))
    return out


# -- finite-horizon estimates ---------------------------------------------------------

@dataclass(frozen=True)
class UnfoldingEstimate:
    lower: Fraction
    upper: Fraction
    horizon: int
    exact: bool

    def to_json(self):
        return {"lower": fmt(self.lower), "upper": fmt(self.upper), "horizon": self.horizon, "exact": self.exact}


def unfolding_set_estimate(f: PLMap, x, horizon: int) -> UnfoldingEstimate:
    """Range of (F^n(x/2) - x/2)/n for n in [horizon/2, horizon].

    When x turns out to be periodic within the horizon the exact unfolding
    number is returned instead.
    """
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    x = as_fraction(x)
    L = heaved(f)
    k = least_period(f, x, horizon)
    if k is not None:
        up = cycle_unfolding_pair(f, x, k, L)
        v = Fraction(up.p, up.q)
        return UnfoldingEstimate(v, v, horizon, True)
    y = x / 2
    z = y
    ratios = []
    start = max(1, ceil(Fraction(horizon, 2)))
    for n in range(1, horizon + 1):
        z = L(z)
        if n >= start:
            ratios.append((z - y) / n)
    return UnfoldingEstimate(min(ratios), max(ratios), horizon, False)


# -- cycles realizing u_f ---------------------------------------------------------------

@dataclass
class Realization:
    orbit: PeriodicOrbit | None
    target: Fraction | None
    pair: UnfoldingPair | None = None
    degenerate: bool = False
    transcript: list[str] = field(default_factory=list)

    @property
    def found(self) -> bool:
        return self.orbit is not None

    def to_json(self):
        return {
            "found": self.found,
            "target": None if self.target is None else fmt(self.target),
            "orbit": None if self.orbit is None else self.orbit.to_json(),
            "pair": None if self.pair is None else [self.pair.p, self.pair.q],
            "degenerate": self.degenerate,
            "transcript": self.transcript,
        }


def realize_minimal(f: PLMap, period_cap: int | None = None, max_den: int = 64,
                    enumeration_budget: int = 12) -> Realization:
    """A cycle of f whose unfolding number equals u_f, when u_f is rational.

    First tries the cycle of the lower envelope, folded back to the interval;
    then scans periodic orbits by increasing period up to ``period_cap``
    (default three times the denominator of u_f).  Exhaustive scans beyond
    ``enumeration_budget`` are skipped and noted in the transcript.
    """
    interval = unfolding_interval(f, max_den)
    u = interval.u_f
    if not isinstance(u, Exact):
        return Realization(None, None, transcript=[f"u_f not certified rational: {u}"])
    target = u.value
    cap = period_cap if period_cap is not None else 3 * target.denominator
    res = Realization(None, target, degenerate=(target == 0))
    log = res.transcript
    F = heaved(f)
    Fl = pour_lower(F)

    cyc = find_cycle(Fl, target.numerator, target.denominator)
    log.append(f"lower-envelope cycle from {fmt(cyc.points[0])}, touches flat spot: {cyc.touches_flat}")
    if all(F(z) == Fl(z) for z in cyc.points):
        x = fold(cyc.points[0])
        k = least_period(f, x, max(cap, 2 * target.denominator))
        if k is None:
            log.append(f"folded point {fmt(x)} not periodic within cap")
        else:
            up = cycle_unfolding_pair(f, x, k, F)
            log.append(f"folded point {fmt(x)}: period {k}, unfolding pair ({up.p}, {up.q})")
            if Fraction(up.p, up.q) == target:
                res.orbit = _orbit(f, x, k)
                res.pair = up
                return res
    else:
        log.append("envelope cycle leaves the graph of the heaved lift")

    limit = min(cap, enumeration_budget)
    if limit >= 1:
        orbits = periodic_orbits(f, limit)
        for k in range(1, limit + 1):
            for orb in orbits:
                if orb.period != k:
                    continue
                up = orbit_unfolding_pair(f, orb, F)
                if Fraction(up.p, up.q) == target:
                    log.append(f"period {k}: match ({up.p}, {up.q})")
                    res.orbit, res.pair = orb, up
                    return res
            log.append(f"period {k}: no cycle with unfolding number {fmt(target)}")
    if cap > limit:
        log.append(f"periods {limit + 1}..{cap} not enumerated (budget {enumeration_budget})")
    log.append("not found")
    return res


def _orbit(f: PLMap, x, k: int) -> PeriodicOrbit:
    pts = [x]
    for _ in range(k - 1):
        pts.append(f(pts[-1]))
    j = pts.index(min(pts))
    return PeriodicOrbit(tuple(pts[j:] + pts[:j]), k)


# -- walk-level unfolding numbers ---------------------------------------------------------
#
# A periodic point that avoids the nodes of a P-linear map has a unique closed walk
# of cells.  Its heaved orbit alternates between a left copy k + x/2 and a mirrored
# copy k + 1 - x/2: leaving the left copy happens after a cell right of the
# maximum, returning (with a unit gained) after a cell left of the minimum.

def _step(cell: int, right: bool, M: int, m: int) -> tuple[bool, int]:
    if not right:
        return (cell >= M), 0
    if cell < m:
        return False, 1
    return True, 0


def walk_unfolding_number(walk, max_node: int, min_node: int) -> Fraction:
    """Unfolding number of the cycle with the given closed walk of cells.

    Cells are numbered 0..q-2 and nodes 0..q-1 left to right; ``max_node`` and
    ``min_node`` are the node indices of the absolute maximum and minimum.
    """
    def run(right):
        d = 0
        for c in walk:
            right, inc = _step(c, right, max_node, min_node)
            d += inc
        return right, d

    n = len(walk)
    s1, d1 = run(False)
    if not s1:
        return Fraction(d1, n)
    s2, d2 = run(True)
    if s2:
        return Fraction(d2, n)
    return Fraction(d1 + d2, 2 * n)


def unfolding_number_range(P: Pattern, N: int) -> tuple[Fraction, Fraction]:
    """Exact (min, max) unfolding number over all cycles of f_P of period <= N.

    Cycles off the nodes are covered by a dynamic programme over closed walks
    that tracks both automaton runs; cycles through nodes are evaluated directly.
    """
    q = P.q
    f = p_linear_map(P)
    M, m = P.max_pos - 1, P.min_pos - 1
    us = [v - 1 for v in P.images]
    succ = [range(min(us[c], us[c + 1]), max(us[c], us[c + 1])) for c in range(q - 1)]
    best_lo, best_hi = None, None

    def consider(v):
        nonlocal best_lo, best_hi
        if best_lo is None or v < best_lo:
            best_lo = v
        if best_hi is None or v > best_hi:
            best_hi = v

    for c0 in range(q - 1):
        # key: (last cell, state of run from left copy, state of run from mirror)
        # value: [min dL, max dL, min dR, max dR, min dL+dR, max dL+dR]
        sL, iL = _step(c0, False, M, m)
        sR, iR = _step(c0, True, M, m)
        layer = {(c0, sL, sR): [iL, iL, iR, iR, iL + iR, iL + iR]}
        for n in range(1, N + 1):
            for (c, a, b), v in layer.items():
                if c0 not in succ[c]:
                    continue
                if not a:
                    consider(Fraction(v[0], n))
                    consider(Fraction(v[1], n))
                elif b:
                    consider(Fraction(v[2], n))
                    consider(Fraction(v[3], n))
                else:
                    consider(Fraction(v[4], 2 * n))
                    consider(Fraction(v[5], 2 * n))
            if n == N:
                break
            nxt: dict = {}
            for (c, a, b), v in layer.items():
                for nc in succ[c]:
                    a2, ia = _step(nc, a, M, m)
                    b2, ib = _step(nc, b, M, m)
                    key = (nc, a2, b2)
                    w = nxt.get(key)
                    cand = [v[0] + ia, v[1] + ia, v[2] + ib, v[3] + ib, v[4] + ia + ib, v[5] + ia + ib]
                    if w is None:
                        nxt[key] = cand
                    else:
                        for i in (0, 2, 4):
                            if cand[i] < w[i]:
                                w[i] = cand[i]
                        for i in (1, 3, 5):
                            if cand[i] > w[i]:
                                w[i] = cand[i]
            layer = nxt

    # the only cycle through nodes is the pattern's own orbit
    if q <= N:
        up = cycle_unfolding_pair(f, 0, q)
        consider(Fraction(up.p, up.q))
    return best_lo, best_hi


# -- reports ----------------------------------------------------------------------------

def pattern_report(P: Pattern, route: str = "both", max_den: int = 64) -> dict:
    """JSON-ready record of all invariants of a pattern."""
    if route not in ("comb", "heave", "both"):
        raise ValueError(f"unknown route {route!r}")
    if P.q < 2:
        raise PatternError("reports need period >= 2")
    if route == "comb":
        up = unfolding_pair(P)
    elif route == "heave":
        up = unfolding_number_via_heave(P)
    else:
        up = unfolding_pair(P)
        hv = unfolding_number_via_heave(P)
        if up != hv:
            raise RouteMismatch(f"{P}: index scan gives {up.p}/{up.q}, heave gives {hv.p}/{hv.q}")
    orp = over_rotation_pair(P)
    interval = unfolding_interval(p_linear_map(P), max_den)
    return {
        "pattern": P.cycle_notation(),
        "period": P.q,
        "images": list(P.images),
        "orp": [orp.l, orp.q],
        "up": [up.p, up.q],
        "mup": mup_json(modified_pair(up.p, up.q)),
        "modality": modality(P),
        "divergent": is_divergent(P),
        "sheer": is_sheer(P),
        "u_f": interval.u_f.to_json(),
        "interval": interval.endpoints(),
        "interval_certified": interval.certified,
    }
