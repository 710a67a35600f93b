"""Verification sweeps shared by the CLI ``verify`` command and the test suite."""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial, gcd

from .forcing import divergent_realization, forced_patterns
from .heave import DegreeOneLift, heaved
from .patterns import (
    TWO_INF,
    all_patterns,
    is_convergent,
    is_sheer,
    modality,
    over_rotation_pair,
    parse_pattern,
    sharkovsky_ge,
    sharkovsky_key,
    unfolding_pair,
)
from .plmap import PLMap, p_linear_map
from .rotation import (
    Exact,
    lift_max,
    pour_lower,
    pour_upper,
    rotation_number,
    sup_difference,
    sup_distance,
    water_capacity,
    water_family,
)
from .unfolding import (
    realize_minimal,
    unfolding_interval,
    unfolding_number_range,
    unfolding_number_via_heave,
)

DEFAULT_SEED = 20240101
HALF = Fraction(1, 2)
DIVERGENT = "(1 3 4 2)"


@dataclass
class SuiteResult:
    name: str
    cases: int = 0
    failed: int = 0
    failures: list[str] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    extra: dict = field(default_factory=dict)
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return self.failed == 0

    def fail(self, msg: str, keep: int = 20):
        self.failed += 1
        if len(self.failures) < keep:
            self.failures.append(msg)

    def summary(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.name}: {self.cases} cases, {self.failed} failures ({self.seconds:.1f}s)"


def _timed(fn):
    def run(*args, **kwargs):
        t = time.perf_counter()
        res = fn(*args, **kwargs)
        res.seconds = time.perf_counter() - t
        return res

    run.__name__ = fn.__name__
    run.__doc__ = fn.__doc__
    return run


# -- random lifts -------------------------------------------------------------------

def _rand_frac(rng: random.Random, lo: int, hi: int, den: int) -> Fraction:
    return Fraction(rng.randint(lo * den, hi * den), den)


def random_lift(rng: random.Random, max_nodes: int = 8, den: int = 24) -> DegreeOneLift:
    """A random PL degree-one lift with values roughly in [-1, 2]."""
    k = rng.randint(1, max_nodes - 1)
    xs = sorted({Fraction(rng.randint(1, den - 1), den) for _ in range(k)})
    y0 = _rand_frac(rng, -1, 1, den)
    ys = [y0] + [_rand_frac(rng, -1, 2, den) for _ in xs] + [y0 + 1]
    return DegreeOneLift(PLMap(zip([Fraction(0)] + xs + [Fraction(1)], ys)))


def random_monotone_lift(rng: random.Random, max_nodes: int = 8, den: int = 24) -> DegreeOneLift:
    """A random non-decreasing degree-one lift (flat pieces allowed)."""
    k = rng.randint(1, max_nodes - 1)
    xs = sorted({Fraction(rng.randint(1, den - 1), den) for _ in range(k)})
    cuts = sorted(Fraction(rng.randint(0, den), den) for _ in xs)
    y0 = _rand_frac(rng, -1, 1, den)
    ys = [y0] + [y0 + c for c in cuts] + [y0 + 1]
    return DegreeOneLift(PLMap(zip([Fraction(0)] + xs + [Fraction(1)], ys)))


def _le(F: DegreeOneLift, G: DegreeOneLift) -> bool:
    return sup_difference(F, G) <= 0


# -- suites ----------------------------------------------------------------------------

@_timed
def suite_routes(max_q: int = 9) -> SuiteResult:
    """Index-set unfolding pairs against heaved orbits, all patterns 2 <= q <= max_q."""
    res = SuiteResult("routes")
    for q in range(2, max_q + 1):
        for P in all_patterns(q):
            res.cases += 1
            a, b = unfolding_pair(P), unfolding_number_via_heave(P)
            if a != b:
                res.fail(f"{P}: scan {a.p}/{a.q} vs heave {b.p}/{b.q}")
    expected = sum(factorial(q - 1) for q in range(2, max_q + 1))
    if res.cases != expected:
        res.fail(f"swept {res.cases} patterns, expected {expected}")
    return res


@_timed
def suite_comparison(max_q: int = 9) -> SuiteResult:
    """orn <= un on convergent patterns, equality on sheer ones, modality <= 2 sheer."""
    res = SuiteResult("comparison")
    conv = sheer = low = 0
    for q in range(2, max_q + 1):
        for P in all_patterns(q):
            if not is_convergent(P):
                continue
            conv += 1
            res.cases += 1
            orn = over_rotation_pair(P).number
            un = unfolding_pair(P).number
            if orn > un:
                res.fail(f"{P}: orn {orn} > un {un}")
            if is_sheer(P):
                sheer += 1
                if orn != un:
                    res.fail(f"{P}: sheer but orn {orn} != un {un}")
            if modality(P) <= 2:
                low += 1
                if not is_sheer(P):
                    res.fail(f"{P}: modality {modality(P)} but not sheer")
    res.notes.append(f"{conv} convergent, {sheer} sheer, {low} of modality <= 2")
    return res


@_timed
def suite_pouring(seed: int = DEFAULT_SEED, count: int = 200) -> SuiteResult:
    """Water-pouring laws on seeded random lifts, checked at all breakpoints."""
    rng = random.Random(seed)
    res = SuiteResult("pouring")
    res.notes.append(f"seed {seed}")
    for i in range(count):
        res.cases += 1
        F = random_lift(rng)
        G = random_lift(rng)
        M = random_monotone_lift(rng)
        Fl, Fu = pour_lower(F), pour_upper(F)
        tag = f"lift {i}"
        if not (_le(Fl, F) and _le(F, Fu)):
            res.fail(f"{tag}: sandwich")
        if pour_lower(M) != M or pour_upper(M) != M:
            res.fail(f"{tag}: monotone lift changed by pouring")
        if pour_lower(Fl) != Fl or pour_upper(Fu) != Fu:
            res.fail(f"{tag}: pouring not idempotent")
        d = sup_distance(F, G)
        if sup_distance(Fl, pour_lower(G)) > d or sup_distance(Fu, pour_upper(G)) > d:
            res.fail(f"{tag}: Lipschitz bound")
        H = lift_max(F, G)
        if not (_le(Fl, pour_lower(H)) and _le(Fu, pour_upper(H))):
            res.fail(f"{tag}: pouring not monotone in the lift")
        cap = water_capacity(F)
        if water_family(F, 0) != Fl:
            res.fail(f"{tag}: F_0 != F_l")
        if water_family(F, cap) != Fu:
            res.fail(f"{tag}: F_cap != F_u")
        mus = sorted({cap * Fraction(rng.randint(0, 8), 8) for _ in range(3)})
        fam = [water_family(F, mu) for mu in mus]
        for (m1, F1), (m2, F2) in zip(zip(mus, fam), zip(mus[1:], fam[1:])):
            if not _le(F1, F2):
                res.fail(f"{tag}: F_mu not monotone in mu")
            if sup_distance(F1, F2) > m2 - m1:
                res.fail(f"{tag}: F_mu not 1-Lipschitz in mu")
    return res


def _certainly_greater(a, b) -> bool:
    """Rotation results a, b with rho(a) > rho(b) certain."""
    if isinstance(a, Exact) and isinstance(b, Exact):
        return a.value > b.value
    return a.lo >= b.hi


def _shift(r, k):
    return Exact(r.value + k) if isinstance(r, Exact) else type(r)(r.lo + k, r.hi + k)


@_timed
def suite_rotation(seed: int = DEFAULT_SEED, pairs: int = 100, max_den: int = 64) -> SuiteResult:
    """Translations, monotone comparison and integer shifts."""
    res = SuiteResult("rotation")
    res.notes.append(f"seed {seed}")
    for q in range(1, max_den + 1):
        for p in range(0, q + 1):
            if gcd(p, q) != 1:
                continue
            res.cases += 1
            r = rotation_number(DegreeOneLift.translation(Fraction(p, q)), max_den)
            if r != Exact(Fraction(p, q)):
                res.fail(f"x + {p}/{q}: got {r}")
    rng = random.Random(seed)
    for i in range(pairs):
        res.cases += 1
        G = random_monotone_lift(rng)
        H = lift_max(G, random_monotone_lift(rng))
        rg, rh = rotation_number(G, max_den), rotation_number(H, max_den)
        if _certainly_greater(rg, rh):
            res.fail(f"pair {i}: rho(G) {rg} > rho(H) {rh} although G <= H")
        r1 = rotation_number(G + 1, max_den)
        if r1 != _shift(rg, 1):
            res.fail(f"pair {i}: rho(G + 1) = {r1}, rho(G) = {rg}")
    return res


@_timed
def suite_divergent(max_q: int = 15, extended: bool = False) -> SuiteResult:
    """Cycles with every unfolding pair (p, q), 3p + 3 <= q <= max_q, for the
    divergent 4-pattern; ``extended`` also covers 3p <= q."""
    P = parse_pattern(DIVERGENT)
    res = SuiteResult("divergent")
    for q in range(1, max_q + 1):
        for p in range(1, q + 1):
            if 3 * p + 3 > q and not (extended and 3 * p <= q):
                continue
            res.cases += 1
            try:
                r = divergent_realization(P, p, q)
            except RuntimeError as exc:
                res.fail(f"({p}, {q}): {exc}")
                continue
            if r.orbit.period != q or unfolding_number_via_heave(r.orbit.pattern) != r.pair:
                res.fail(f"({p}, {q}): heave route disagrees")
    return res


@_timed
def suite_interval(max_q: int = 7, N: int = 10, max_den: int = 64) -> SuiteResult:
    """Upper envelope rotates at 1/2 and all cycles up to period N unfold within
    [u_f, 1/2], for every pattern of period <= max_q."""
    res = SuiteResult("interval")
    upper_bad = {True: 0, False: 0}
    outside = 0
    res.extra["upper_failures"] = []
    for q in range(2, max_q + 1):
        for P in all_patterns(q):
            res.cases += 1
            f = p_linear_map(P)
            F = heaved(f)
            upper = rotation_number(pour_upper(F), max_den)
            lower = rotation_number(pour_lower(F), max_den)
            ordered = P.max_pos < P.min_pos
            if upper != Exact(HALF):
                upper_bad[ordered] += 1
                res.extra["upper_failures"].append(P)
                res.fail(f"{P}: rho(F_u) = {upper}")
            lo, hi = unfolding_number_range(P, N)
            below = lo < lower.value if isinstance(lower, Exact) else lo <= lower.lo
            if below or hi > HALF:
                outside += 1
                res.fail(f"{P}: cycle unfolding numbers span [{lo}, {hi}], u_f = {lower}")
    fixture = unfolding_interval(p_linear_map(parse_pattern("(1 2 3)"))).u_f
    res.cases += 1
    if fixture != Exact(Fraction(1, 3)):
        res.fail(f"(1 2 3): u_f = {fixture}, expected 1/3")
    res.notes.append(
        f"rho(F_u) != 1/2 for {upper_bad[True]} patterns with max left of min, "
        f"{upper_bad[False]} with max right of min"
    )
    res.extra["outside"] = outside
    res.notes.append(f"{outside} patterns with a cycle of period <= {N} outside [u_f, 1/2]")
    return res


@_timed
def suite_sharkovsky(max_q: int = 7, N: int = 8) -> SuiteResult:
    """Order axioms on {1..64} and 2^inf, the displayed chain, and closure of
    forced period sets."""
    res = SuiteResult("sharkovsky")
    elems = list(range(1, 65)) + [TWO_INF]
    for a in elems:
        res.cases += 1
        if not sharkovsky_ge(a, a):
            res.fail(f"not reflexive at {a}")
        for b in elems:
            ab, ba = sharkovsky_ge(a, b), sharkovsky_ge(b, a)
            if not (ab or ba):
                res.fail(f"{a}, {b} incomparable")
            if ab and ba and a is not b and a != b:
                res.fail(f"{a}, {b} violate antisymmetry")
    key = sorted(elems, key=sharkovsky_key)
    for i in range(len(key) - 2):
        for j in range(i + 1, len(key)):
            if not sharkovsky_ge(key[i], key[j]):
                res.fail(f"transitivity/order broken between {key[i]} and {key[j]}")
    odd = [n for n in range(3, 65, 2)]
    chain = odd + [2 * n for n in odd] + [TWO_INF, 32, 16, 8, 4, 2, 1]
    for a, b in zip(chain, chain[1:]):
        res.cases += 1
        if not sharkovsky_ge(a, b) or sharkovsky_ge(b, a):
            res.fail(f"chain step {a} > {b} not strict")
    for q in range(2, max_q + 1):
        for P in all_patterns(q):
            res.cases += 1
            periods = {Q.q for Q in forced_patterns(P, N)}
            for m in periods:
                missing = [n for n in range(1, N + 1) if sharkovsky_ge(m, n) and n not in periods]
                if missing:
                    res.fail(f"{P}: has period {m} but misses {missing}")
    return res


@_timed
def suite_minimal(max_q: int = 7, max_u_den: int = 6, cap: int = 18) -> SuiteResult:
    """realize_minimal on every pattern whose u_f is exact with small denominator."""
    res = SuiteResult("minimal")
    skipped = 0
    for q in range(2, max_q + 1):
        for P in all_patterns(q):
            f = p_linear_map(P)
            u = unfolding_interval(f).u_f
            if not (isinstance(u, Exact) and u.value.denominator <= max_u_den):
                skipped += 1
                continue
            res.cases += 1
            r = realize_minimal(f, period_cap=cap)
            if not r.found:
                res.fail(f"{P}: {'; '.join(r.transcript)}")
    res.notes.append(f"{skipped} patterns outside the cohort")
    return res


SUITES = {
    "routes": suite_routes,
    "comparison": suite_comparison,
    "pouring": suite_pouring,
    "rotation": suite_rotation,
    "divergent": suite_divergent,
    "interval": suite_interval,
    "sharkovsky": suite_sharkovsky,
    "minimal": suite_minimal,
}
SEEDED = {"pouring", "rotation"}
