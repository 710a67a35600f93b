"""Markov graphs of cycles, loops of intervals, and the cycles they force."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from fractions import Fraction

from ._rational import fmt
from .patterns import (
    OverRotationPair,
    Pattern,
    PatternError,
    UnfoldingPair,
    divergence_witness,
    modified_pair,
    over_rotation_pair,
    unfolding_pair,
)
from .plmap import (
    PLMap,
    PeriodicOrbit,
    RationalInterval,
    _grid_cycles,
    _grid_form,
    fixed_points,
    least_period,
    p_linear_map,
    periodic_orbits,
)


class LoopError(ValueError):
    """A loop that is not realizable as stated."""


@dataclass(frozen=True)
class MarkovGraph:
    """Basic intervals of a cycle; ``covers[i]`` lists the j with f(I_i) containing I_j."""

    intervals: tuple[RationalInterval, ...]
    covers: tuple[tuple[int, ...], ...]
    f: PLMap

    def label(self, i: int) -> str:
        return f"I{i + 1}"

    def edges(self) -> list[tuple[int, int]]:
        return [(i, j) for i, js in enumerate(self.covers) for j in js]

    def __len__(self):
        return len(self.intervals)


def markov_graph_of(f: PLMap, points) -> MarkovGraph:
    """Covering graph of the intervals between consecutive ``points``."""
    pts = sorted(points)
    ivs = tuple(RationalInterval(a, b) for a, b in zip(pts, pts[1:]))
    covers = []
    for I in ivs:
        ya, yb = f(I.lo), f(I.hi)
        # image of a basic interval: the map is monotone there for P-linear maps,
        # but take the true range to stay correct for any PL map
        inner = [y for x, y in f.nodes if I.lo < x < I.hi]
        lo, hi = min([ya, yb] + inner), max([ya, yb] + inner)
        covers.append(tuple(j for j, J in enumerate(ivs) if lo <= J.lo and J.hi <= hi))
    return MarkovGraph(ivs, tuple(covers), f)


def markov_graph(P: Pattern) -> MarkovGraph:
    f = p_linear_map(P)
    return markov_graph_of(f, f.xs)


@dataclass(frozen=True, order=True)
class Loop:
    cells: tuple[int, ...]

    def __len__(self):
        return len(self.cells)

    def labels(self) -> list[str]:
        return [f"I{c + 1}" for c in self.cells]


def _canonical(walk: tuple) -> tuple:
    return min(walk[i:] + walk[:i] for i in range(len(walk)))


def _primitive(walk: tuple) -> bool:
    k = len(walk)
    return all(walk != walk[d:] + walk[:d] for d in range(1, k) if k % d == 0)


def loops_up_to(G: MarkovGraph, L: int) -> list[Loop]:
    """Primitive loops of length <= L, one per cyclic rotation class,
    sorted by (length, itinerary)."""
    if L < 1:
        raise ValueError("L must be >= 1")
    found = set()
    n = len(G)

    def extend(walk):
        last = walk[-1]
        for nxt in G.covers[last]:
            if nxt < walk[0]:
                continue  # canonical rotations start at their minimum cell
            if nxt == walk[0]:
                w = tuple(walk)
                if _primitive(w) and _canonical(w) == w:
                    found.add(w)
            if len(walk) < L:
                walk.append(nxt)
                extend(walk)
                walk.pop()

    for c in range(n):
        extend([c])
    return [Loop(w) for w in sorted(found, key=lambda w: (len(w), w))]


# -- itineraries ---------------------------------------------------------------------

def _pieces(f: PLMap, I: RationalInterval):
    """Affine pieces (lo, hi, a, b) of f restricted to I, y = a x + b."""
    xs = [I.lo] + [x for x in f.xs if I.lo < x < I.hi] + [I.hi]
    out = []
    for u, v in zip(xs, xs[1:]):
        fu, fv = f(u), f(v)
        a = (fv - fu) / (v - u)
        out.append((u, v, a, fu - a * u))
    return out


def itinerary_branches(f: PLMap, intervals) -> list[tuple[RationalInterval, Fraction, Fraction]]:
    """Components X of {x in I_0 : f^j(x) in I_j for j < k, f^k(x) in I_0}
    together with the affine form A x + B of f^k on each."""
    seq = list(intervals)
    k = len(seq)
    # components for the suffix starting at j, as (X, A, B) with f^{k-j} = A x + B on X
    comps = [(seq[0], Fraction(1), Fraction(0))]
    for j in range(k - 1, -1, -1):
        new = []
        for u, v, a, b in _pieces(f, seq[j]):
            for X, A, B in comps:
                if a == 0:
                    y = b
                    if X.lo <= y <= X.hi:
                        new.append((RationalInterval(u, v), Fraction(0), A * y + B))
                    continue
                p0, p1 = (X.lo - b) / a, (X.hi - b) / a
                lo, hi = max(min(p0, p1), u), min(max(p0, p1), v)
                if lo <= hi:
                    new.append((RationalInterval(lo, hi), A * a, A * b + B))
        comps = new
    return comps


@dataclass(frozen=True)
class LoopOrbit:
    """The point found for a loop, its itinerary-ordered orbit and least period."""

    points: tuple
    least_period: int
    isolated: bool

    def periodic_orbit(self) -> PeriodicOrbit:
        pts = list(self.points[: self.least_period])
        j = pts.index(min(pts))
        return PeriodicOrbit(tuple(pts[j:] + pts[:j]), self.least_period, self.isolated)


def orbit_from_intervals(f: PLMap, intervals) -> LoopOrbit:
    """A periodic point following the closed itinerary ``intervals``."""
    seq = list(intervals)
    k = len(seq)
    best = None
    for X, A, B in itinerary_branches(f, seq):
        if A != 1:
            x = B / (1 - A)
            if X.lo <= x <= X.hi:
                cand = (x, True)
            else:
                continue
        elif B == 0:
            cand = (X.midpoint, False)
        else:
            continue
        if best is None or cand[0] < best[0]:
            best = cand
    if best is None:
        raise LoopError("no periodic point follows this itinerary")
    x, isolated = best
    pts = [x]
    for _ in range(k - 1):
        pts.append(f(pts[-1]))
    if f(pts[-1]) != x or any(not (I.lo <= p <= I.hi) for p, I in zip(pts, seq)):
        raise LoopError("itinerary check failed")
    return LoopOrbit(tuple(pts), least_period(f, x, k), isolated)


def orbit_from_loop(G: MarkovGraph, loop: Loop | tuple) -> LoopOrbit:
    cells = loop.cells if isinstance(loop, Loop) else tuple(loop)
    for a, b in zip(cells, cells[1:] + cells[:1]):
        if b not in G.covers[a]:
            raise LoopError(f"I{a + 1} does not cover I{b + 1}")
    return orbit_from_intervals(G.f, [G.intervals[c] for c in cells])


# -- forced cycles ---------------------------------------------------------------------

@dataclass(frozen=True)
class SpectrumEntry:
    pattern: Pattern
    orp: OverRotationPair | None
    up: UnfoldingPair | None

    @property
    def period(self) -> int:
        return self.pattern.q


def _pattern_from_values(vals) -> Pattern:
    order = sorted(range(len(vals)), key=lambda i: vals[i])
    rank = [0] * len(vals)
    for r, i in enumerate(order):
        rank[i] = r + 1
    k = len(vals)
    images = [0] * k
    for j in range(k):
        images[rank[j] - 1] = rank[(j + 1) % k]
    return Pattern(tuple(images))


def forced_patterns(P: Pattern, N: int) -> set[Pattern]:
    """Patterns of all cycles of the P-linear map with period <= N."""
    f = p_linear_map(P)
    grid = _grid_form(f)
    if grid is not None:
        return {_pattern_from_values(nums) for nums, _, _ in _grid_cycles(f, N, grid)}
    return {o.pattern for o in periodic_orbits(f, N)}


def forced_spectrum(P: Pattern, N: int) -> list[SpectrumEntry]:
    """Distinct patterns forced by P up to period N, with their invariants.

    Fixed points carry no over-rotation or unfolding pair.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    if P.q < 2:
        raise PatternError("forcing needs period >= 2")
    out = []
    for Q in sorted(forced_patterns(P, N), key=lambda Q: (Q.q, Q.images)):
        if Q.q == 1:
            out.append(SpectrumEntry(Q, None, None))
        else:
            out.append(SpectrumEntry(Q, over_rotation_pair(Q), unfolding_pair(Q)))
    return out


def spectrum_csv(entries) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["period", "pattern", "orp", "up", "mup"])
    for e in entries:
        if e.up is None:
            w.writerow([e.period, e.pattern.cycle_notation(" "), "", "", ""])
            continue
        mp = modified_pair(e.up.p, e.up.q)
        w.writerow([
            e.period,
            e.pattern.cycle_notation(" "),
            f"({e.orp.l},{e.orp.q})",
            f"({e.up.p},{e.up.q})",
            f"({fmt(mp.t)};{mp.m})",
        ])
    return buf.getvalue()


# -- divergent patterns ------------------------------------------------------------------

@dataclass(frozen=True)
class DivergentIntervals:
    witness: tuple[int, int, int]
    a: Fraction
    b: Fraction
    c: Fraction
    J: RationalInterval
    K1: RationalInterval
    K2: RationalInterval
    L: RationalInterval


def _fixed_in(f: PLMap, lo, hi) -> list[Fraction]:
    out = []
    for item in fixed_points(f):
        if isinstance(item, Fraction):
            if lo < item < hi:
                out.append(item)
        else:
            out.extend(v for v in (item.lo, item.hi) if lo < v < hi)
    return sorted(out)


def _preimages(f: PLMap, y, lo, hi) -> list[Fraction]:
    out = set()
    for i in range(len(f.xs) - 1):
        x0, x1, y0, y1 = f.xs[i], f.xs[i + 1], f.ys[i], f.ys[i + 1]
        if y0 == y1:
            if y0 == y:
                out.update((x0, x1))
            continue
        if min(y0, y1) <= y <= max(y0, y1):
            out.add(x0 + (y - y0) * (x1 - x0) / (y1 - y0))
    return sorted(t for t in out if lo < t < hi)


def divergent_intervals(P: Pattern) -> DivergentIntervals:
    """J = [a, c], K1 = [c, y], K2 = [y, b], L = [b, z] from the smallest witness.

    a is the largest fixed point in (x, y), b the smallest in (y, z), and c the
    smallest preimage of b in (a, y).
    """
    wit = divergence_witness(P)
    if wit is None:
        raise PatternError(f"{P} is convergent")
    f = p_linear_map(P)
    x, y, z = (f.xs[i - 1] for i in wit)
    fa = _fixed_in(f, x, y)
    fb = _fixed_in(f, y, z)
    if not fa or not fb:
        raise RuntimeError("divergence witness without the expected fixed points")
    a, b = fa[-1], fb[0]
    cs = _preimages(f, b, a, y)
    if not cs:
        raise RuntimeError("no preimage of b between a and y")
    c = cs[0]
    return DivergentIntervals(
        wit, a, b, c,
        RationalInterval(a, c), RationalInterval(c, y), RationalInterval(y, b), RationalInterval(b, z),
    )


def divergent_loop(p: int, q: int) -> list[str]:
    """J^(q-3p) K2 (L J K1)^(p-1) L J: a loop of length q whose cycle has
    unfolding pair (p, q)."""
    if p < 1 or q < 3 * p:
        raise ValueError("need p >= 1 and q >= 3p")
    return ["J"] * (q - 3 * p) + ["K2"] + ["L", "J", "K1"] * (p - 1) + ["L", "J"]


@dataclass(frozen=True)
class DivergentRealization:
    orbit: PeriodicOrbit
    loop: tuple[str, ...]
    pair: UnfoldingPair


def divergent_realization(P: Pattern, p: int, q: int) -> DivergentRealization:
    """A cycle of the P-linear map of a divergent P with unfolding pair (p, q)."""
    ivs = divergent_intervals(P)
    loop = divergent_loop(p, q)
    f = p_linear_map(P)
    named = {"J": ivs.J, "K1": ivs.K1, "K2": ivs.K2, "L": ivs.L}
    lo = orbit_from_intervals(f, [named[s] for s in loop])
    if lo.least_period != q:
        raise RuntimeError(f"loop produced period {lo.least_period}, expected {q}")
    orb = lo.periodic_orbit()
    up = unfolding_pair(orb.pattern)
    if up != UnfoldingPair(p, q):
        raise RuntimeError(f"loop produced unfolding pair ({up.p}, {up.q}), expected ({p}, {q})")
    return DivergentRealization(orb, tuple(loop), up)
