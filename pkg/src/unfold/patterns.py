"""Cyclic permutations ("patterns") and their exact combinatorial invariants.

A pattern of period ``q`` is stored as its image list: ``images[i-1]`` is the
position (1..q, left to right) of the image of the point at position ``i``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from math import gcd

from ._rational import fmt


class PatternError(ValueError):
    """Raised for malformed or non-cyclic permutations."""


@dataclass(frozen=True)
class Pattern:
    images: tuple[int, ...]

    def __post_init__(self):
        images = tuple(int(v) for v in self.images)
        object.__setattr__(self, "images", images)
        q = len(images)
        if q == 0:
            raise PatternError("empty pattern")
        if sorted(images) != list(range(1, q + 1)):
            bad = [v for v in images if not 1 <= v <= q]
            if bad:
                raise PatternError(f"entries out of range 1..{q}: {bad}")
            raise PatternError("images do not form a permutation")
        # single cycle: the orbit of 1 visits every position
        seen, i = 1, images[0]
        while i != 1:
            i = images[i - 1]
            seen += 1
        if seen != q:
            raise PatternError("permutation is not a single cycle")

    @property
    def q(self) -> int:
        return len(self.images)

    @property
    def period(self) -> int:
        return len(self.images)

    @property
    def max_pos(self) -> int:
        """Position whose image is q (absolute maximum of the P-linear map)."""
        return self.images.index(self.q) + 1

    @property
    def min_pos(self) -> int:
        """Position whose image is 1 (absolute minimum of the P-linear map)."""
        return self.images.index(1) + 1

    def image(self, i: int) -> int:
        return self.images[i - 1]

    def trajectory(self, start: int = 1) -> list[int]:
        """Positions ``start, P(start), ..., P^{q-1}(start)``."""
        t = [start]
        for _ in range(self.q - 1):
            t.append(self.images[t[-1] - 1])
        return t

    def cycle_notation(self, sep: str = ",") -> str:
        return "(" + sep.join(str(v) for v in self.trajectory(1)) + ")"

    def reversed(self) -> "Pattern":
        """Conjugate by the orientation flip i -> q+1-i."""
        q = self.q
        return Pattern(tuple(q + 1 - self.images[q - i] for i in range(1, q + 1)))

    def __str__(self):
        return self.cycle_notation()


_SPLIT = re.compile(r"[,\s]+")


def _ints(body: str) -> list[int]:
    parts = [p for p in _SPLIT.split(body.strip()) if p]
    try:
        return [int(p) for p in parts]
    except ValueError as exc:
        raise PatternError(f"non-integer entry in {body!r}") from exc


def parse_pattern(text: str) -> Pattern:
    """Parse cycle notation ``"(a1 a2 ... aq)"`` or an image list ``"i1,...,iq"``."""
    s = text.strip()
    if not s:
        raise PatternError("empty pattern text")
    if s.startswith("("):
        if not s.endswith(")"):
            raise PatternError(f"unbalanced cycle notation: {text!r}")
        cyc = _ints(s[1:-1])
        q = len(cyc)
        if q == 0:
            raise PatternError("empty cycle")
        if sorted(cyc) != list(range(1, q + 1)):
            raise PatternError(f"cycle must list each of 1..{q} exactly once")
        images = [0] * q
        for a, b in zip(cyc, cyc[1:] + cyc[:1]):
            images[a - 1] = b
        return Pattern(tuple(images))
    if s.startswith("[") and s.endswith("]"):
        s = s[1:-1]
    return Pattern(tuple(_ints(s)))


def all_patterns(q: int):
    """Yield every cyclic permutation of period q, in lexicographic cycle order."""
    if q < 1:
        return
    if q == 1:
        yield Pattern((1,))
        return
    for rest in permutations(range(2, q + 1)):
        cyc = (1,) + rest
        images = [0] * q
        for a, b in zip(cyc, cyc[1:] + cyc[:1]):
            images[a - 1] = b
        yield Pattern(tuple(images))


def _need_nontrivial(P: Pattern):
    if P.q < 2:
        raise PatternError("fixed point: invariant needs period >= 2")


# -- over-rotation ----------------------------------------------------------

@dataclass(frozen=True)
class OverRotationPair:
    l: int
    q: int

    @property
    def number(self) -> Fraction:
        return Fraction(self.l, self.q)


def over_rotation_pair(P: Pattern) -> OverRotationPair:
    _need_nontrivial(P)
    halves = 0
    for i in range(1, P.q + 1):
        a = P.image(i)
        b = P.image(a)
        if (a - i) * (b - a) <= 0:
            halves += 1
    # switches of direction come in pairs along a cycle
    assert halves % 2 == 0, halves
    return OverRotationPair(halves // 2, P.q)


# -- unfolding index sets ---------------------------------------------------

def greedy_index_set(P: Pattern) -> list[int]:
    """Smallest-first scan for indices n with t[n-1] < m_pos and t[n-2] > M_pos.

    Indices of the trajectory of the leftmost point are taken modulo q and
    chosen indices are at least two apart.  Counts unfolding points when the
    maximum sits left of the minimum.
    """
    _need_nontrivial(P)
    q = P.q
    t = P.trajectory(1)
    M, m = P.max_pos, P.min_pos
    chosen: list[int] = []
    for n in range(q):
        if chosen and n < chosen[-1] + 2:
            continue
        if t[(n - 1) % q] < m and t[(n - 2) % q] > M:
            chosen.append(n)
    return chosen


def crossing_index_set(P: Pattern) -> list[int]:
    """Times (mod q) at which the heaved orbit of the leftmost point gains a unit.

    Purely combinatorial: the lifted point lives either in the left half of a
    unit interval (where the heaved map follows the miniature map, until the
    point passes the maximum) or in the right half (folded copy, until the
    point passes the minimum, which adds one).
    """
    _need_nontrivial(P)
    q = P.q
    M, m = P.max_pos, P.min_pos
    right = False
    crossings: list[int] = []
    for j, x in enumerate(P.trajectory(1)):
        if not right:
            if x > M:
                right = True
        elif x < m:
            right = False
            crossings.append((j + 1) % q)
    if right:
        # back at the leftmost point, which is an integer in the right half
        crossings.append(0)
    return sorted(crossings)


def unfolding_index_set(P: Pattern) -> list[int]:
    """Unfolding indices of the leftmost point's trajectory.

    Uses the greedy scan when the maximum is left of the minimum; otherwise the
    greedy scan undercounts (e.g. ``(1 3 4 2)`` scans empty but its heaved orbit
    gains one unit) and the half-tracking scan is used instead.
    """
    if P.max_pos < P.min_pos:
        return greedy_index_set(P)
    return crossing_index_set(P)


@dataclass(frozen=True)
class UnfoldingPair:
    p: int
    q: int

    @property
    def number(self) -> Fraction:
        return Fraction(self.p, self.q)


def unfolding_pair(P: Pattern) -> UnfoldingPair:
    return UnfoldingPair(len(unfolding_index_set(P)), P.q)


def observable_phi(P: Pattern, i: int) -> int:
    if not 0 <= i < P.q:
        raise IndexError(f"index {i} outside 0..{P.q - 1}")
    return int(i in unfolding_index_set(P))


# -- shape invariants -------------------------------------------------------

def modality(P: Pattern) -> int:
    """Number of strict interior turning points; a 2-cycle counts as unimodal."""
    _need_nontrivial(P)
    if P.q == 2:
        return 1
    im = P.images
    return sum(1 for k in range(1, P.q - 1) if (im[k] - im[k - 1]) * (im[k + 1] - im[k]) < 0)


def divergence_witness(P: Pattern) -> tuple[int, int, int] | None:
    """Lexicographically smallest (x, y, z), x<y<z, with P(x)<x, P(y)>=z, P(z)<=x."""
    im = P.images
    q = P.q
    for x in range(1, q + 1):
        if im[x - 1] >= x:
            continue
        for y in range(x + 1, q + 1):
            for z in range(y + 1, q + 1):
                if im[y - 1] >= z and im[z - 1] <= x:
                    return x, y, z
    return None


def is_divergent(P: Pattern) -> bool:
    return divergence_witness(P) is not None


def is_convergent(P: Pattern) -> bool:
    return not is_divergent(P)


def is_sheer(P: Pattern) -> bool:
    """Convergent and strictly decreasing on positions from M_pos to m_pos.

    False whenever the minimum sits left of the maximum.
    """
    M, m = P.max_pos, P.min_pos
    if m < M or not is_convergent(P):
        return False
    im = P.images
    return all(im[i - 1] > im[i] for i in range(M, m))


# -- Sharkovsky order and the prong space ------------------------------------

class _TwoToInfinity:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "TWO_INF"

    def __str__(self):
        return "2^inf"

    def __reduce__(self):
        return (_TwoToInfinity, ())


TWO_INF = _TwoToInfinity()


def _sharkovsky_key(n) -> tuple:
    # smaller key == higher in the order (3 is the top)
    if n is TWO_INF:
        return (1, 0, 0)
    if not isinstance(n, int) or isinstance(n, bool) or n < 0:
        raise ValueError(f"not a Sharkovsky element: {n!r}")
    if n == 0:
        return (3, 0, 0)
    k = 0
    while n % 2 == 0:
        n //= 2
        k += 1
    if n > 1:
        return (0, k, n)
    return (2, -k, 0)


def sharkovsky_ge(a, b) -> bool:
    """True iff a = b or a precedes b in the Sharkovsky order.

    ``TWO_INF`` sits below every non-power of two and above every power of
    two; the real-line mark 0 sits below 1.
    """
    return _sharkovsky_key(a) <= _sharkovsky_key(b)


def sharkovsky_key(n):
    """Sort key placing elements in Sharkovsky order, strongest first."""
    return _sharkovsky_key(n)


@dataclass(frozen=True)
class ModifiedPair:
    t: Fraction
    m: int
    degenerate: bool = False


def modified_pair(p: int, q: int) -> ModifiedPair:
    """(m*r, m*s) -> (r/s, m).  p == 0 yields (0, q) flagged degenerate."""
    if q == 0:
        raise ValueError("period must be nonzero")
    if q < 0 or p < 0:
        raise ValueError("pairs are non-negative")
    if p == 0:
        return ModifiedPair(Fraction(0), q, degenerate=True)
    return ModifiedPair(Fraction(p, q), gcd(p, q))


@dataclass(frozen=True)
class MSpaceMarker:
    t: Fraction
    mark: object


@dataclass(frozen=True)
class MSpaceHull:
    left: MSpaceMarker
    right: MSpaceMarker

    def __post_init__(self):
        if self.left.t > self.right.t:
            raise ValueError("hull endpoints must satisfy t1 <= t2")

    def __contains__(self, x: MSpaceMarker) -> bool:
        return hull_contains(self, x)


def hull_contains(h: MSpaceHull, x: MSpaceMarker) -> bool:
    t1, t2 = h.left.t, h.right.t
    if t1 < x.t < t2:
        return x.mark != 0
    return (x.t == t1 and sharkovsky_ge(h.left.mark, x.mark)) or (
        x.t == t2 and sharkovsky_ge(h.right.mark, x.mark)
    )


# -- serialization -----------------------------------------------------------

def mup_json(mp: ModifiedPair) -> dict:
    d = {"t": fmt(mp.t), "m": mp.m}
    if mp.degenerate:
        d["degenerate"] = True
    return d


def pattern_record(P: Pattern) -> dict:
    """JSON-ready invariants of a pattern (rationals as "p/q" strings)."""
    rec: dict = {"pattern": P.cycle_notation(), "period": P.q, "images": list(P.images)}
    if P.q >= 2:
        orp = over_rotation_pair(P)
        up = unfolding_pair(P)
        rec.update(
            orp=[orp.l, orp.q],
            up=[up.p, up.q],
            mup=mup_json(modified_pair(up.p, up.q)),
            modality=modality(P),
            divergent=is_divergent(P),
            sheer=is_sheer(P),
        )
    return rec
