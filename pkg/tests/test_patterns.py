from fractions import Fraction
from itertools import combinations
from math import factorial, gcd

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from unfold.patterns import (
    TWO_INF,
    MSpaceHull,
    MSpaceMarker,
    Pattern,
    PatternError,
    all_patterns,
    crossing_index_set,
    divergence_witness,
    greedy_index_set,
    hull_contains,
    is_convergent,
    is_divergent,
    is_sheer,
    modality,
    modified_pair,
    observable_phi,
    over_rotation_pair,
    parse_pattern,
    pattern_record,
    sharkovsky_ge,
    unfolding_index_set,
    unfolding_pair,
)

from oracles import patterns

TRIMODAL = "(1,2,5,7,10,3,6,8,9,4,11)"


# -- independent oracles -----------------------------------------------------------

def chi_sum(P):
    """Twice the over-rotation count, straight from the turning observable on the
    points k/(q-1) of the P-linear map."""
    q = P.q
    x = {i: Fraction(i - 1, q - 1) for i in range(1, q + 1)}
    total = Fraction(0)
    for i in range(1, q + 1):
        a = P.image(i)
        b = P.image(a)
        if (x[a] - x[i]) * (x[b] - x[a]) <= 0:
            total += Fraction(1, 2)
    return total


def _witness(P, t):
    # x < y < z with f(x) < x, f(y) >= z, f(z) <= x
    x, y, z = t
    return P.image(x) < x and P.image(y) >= z and P.image(z) <= x


def turning_points(P):
    ys = [P.image(i) for i in range(1, P.q + 1)]
    return sum(1 for i in range(1, P.q - 1) if (ys[i] - ys[i - 1]) * (ys[i + 1] - ys[i]) < 0)


# -- parsing ----------------------------------------------------------------------------

def test_parse_trimodal():
    P = parse_pattern(TRIMODAL)
    assert P.q == 11
    assert P.image(1) == 2 and P.image(4) == 11 and P.image(11) == 1


@pytest.mark.parametrize("text", ["(1 2)", "(1,2)", "2,1", "[2, 1]"])
def test_parse_forms_of_transposition(text):
    assert parse_pattern(text).images == (2, 1)


def test_parse_image_list():
    assert parse_pattern("2,3,1") == parse_pattern("(1 2 3)")


@pytest.mark.parametrize("bad", ["", "(1 2 2)", "(1 3)", "2,1,4,3", "(a b)", "(0 1)", "1,2"])
def test_parse_rejects(bad):
    with pytest.raises(PatternError):
        parse_pattern(bad)


def test_pattern_validates_single_cycle():
    with pytest.raises(PatternError):
        Pattern((2, 1, 4, 3))


@given(patterns())
def test_cycle_notation_round_trip(P):
    assert parse_pattern(P.cycle_notation()) == P
    assert parse_pattern(P.cycle_notation(" ")) == P
    assert sorted(P.trajectory()) == list(range(1, P.q + 1))


@pytest.mark.parametrize("q", range(1, 8))
def test_all_patterns_count(q):
    ps = list(all_patterns(q))
    assert len(ps) == factorial(q - 1) == len(set(ps))


# -- over-rotation ------------------------------------------------------------------------

@pytest.mark.parametrize("text,pair", [(TRIMODAL, (3, 11)), ("(1 2)", (1, 2)), ("(1 2 3)", (1, 3))])
def test_over_rotation_examples(text, pair):
    r = over_rotation_pair(parse_pattern(text))
    assert (r.l, r.q) == pair


@given(patterns())
def test_over_rotation_matches_chi(P):
    r = over_rotation_pair(P)
    assert r.l == chi_sum(P)
    assert 0 < r.number <= Fraction(1, 2)


@given(patterns())
def test_over_rotation_mirror_invariant(P):
    assert over_rotation_pair(P) == over_rotation_pair(P.reversed())


# -- unfolding index sets -------------------------------------------------------------------

@pytest.mark.parametrize(
    "text,index_set",
    [(TRIMODAL, [1, 4, 6, 8, 10]), ("(1 2)", [1]), ("(1 2 3)", [1])],
)
def test_index_set_examples(text, index_set):
    assert unfolding_index_set(parse_pattern(text)) == index_set


@pytest.mark.parametrize("text,pair", [(TRIMODAL, (5, 11)), ("(1 2)", (1, 2)), ("(1 2 3)", (1, 3))])
def test_unfolding_pair_examples(text, pair):
    up = unfolding_pair(parse_pattern(text))
    assert (up.p, up.q) == pair


@pytest.mark.parametrize("q", range(2, 8))
def test_scan_and_automaton_count_alike_when_max_left_of_min(q):
    # the two scans pick different times but the same number of them
    for P in all_patterns(q):
        if P.max_pos < P.min_pos:
            assert len(greedy_index_set(P)) == len(crossing_index_set(P)), P


@given(patterns())
def test_index_set_shape(P):
    s = unfolding_index_set(P)
    assert s == sorted(set(s))
    assert all(0 <= n < P.q for n in s)
    assert 2 * len(s) <= P.q


def test_observable_phi():
    P = parse_pattern(TRIMODAL)
    assert observable_phi(P, 4) == 1
    assert observable_phi(P, 2) == 0
    assert observable_phi(parse_pattern("(1 2)"), 0) == 0
    with pytest.raises(IndexError):
        observable_phi(P, 11)


# -- modality / divergence / sheer ---------------------------------------------------------

def test_modality_examples():
    assert modality(parse_pattern(TRIMODAL)) == 3
    assert modality(parse_pattern("(1 2 3)")) == 1
    assert modality(parse_pattern("(1 2)")) == 1


@given(patterns(3))
def test_modality_counts_turns(P):
    assert modality(P) == turning_points(P) >= 1


def test_divergence_examples():
    assert is_divergent(parse_pattern("(1 3 4 2)"))
    assert divergence_witness(parse_pattern("(1 3 4 2)")) == (2, 3, 4)
    assert not is_divergent(parse_pattern("(1 2 3)"))
    assert not is_divergent(parse_pattern(TRIMODAL))
    assert not is_convergent(parse_pattern("(1 3 4 2)"))


@given(patterns(2, 9))
def test_divergence_matches_brute_force(P):
    w = divergence_witness(P)
    assert (w is not None) == any(_witness(P, t) for t in combinations(range(1, P.q + 1), 3))
    if w is not None:
        assert _witness(P, w)


def test_sheer_examples():
    assert is_sheer(parse_pattern("(1 2 3)"))
    assert not is_sheer(parse_pattern(TRIMODAL))
    assert not is_sheer(parse_pattern("(1 3 4 2)"))


# -- Sharkovsky order ----------------------------------------------------------------------

def test_sharkovsky_examples():
    assert sharkovsky_ge(3, 7)
    assert sharkovsky_ge(8, 4)
    assert not sharkovsky_ge(5, 3)
    assert sharkovsky_ge(6, TWO_INF) and sharkovsky_ge(TWO_INF, 1024)
    assert not sharkovsky_ge(TWO_INF, 6)
    assert sharkovsky_ge(1, 0) and not sharkovsky_ge(0, 1)


@given(st.integers(1, 500), st.integers(1, 500))
def test_sharkovsky_total_antisymmetric(a, b):
    assert sharkovsky_ge(a, b) or sharkovsky_ge(b, a)
    if a != b:
        assert sharkovsky_ge(a, b) != sharkovsky_ge(b, a)


@given(st.integers(0, 7), st.integers(0, 7), st.integers(0, 30), st.integers(0, 30))
def test_sharkovsky_by_odd_part(e1, e2, k1, k2):
    a, b = 2**e1 * (2 * k1 + 3), 2**e2 * (2 * k2 + 3)
    # among numbers with an odd factor >= 3, smaller power of two wins, then smaller odd part
    expect = (e1, 2 * k1 + 3) <= (e2, 2 * k2 + 3)
    assert sharkovsky_ge(a, b) == expect


# -- modified pairs and hulls -------------------------------------------------------------

@pytest.mark.parametrize("p,q,t,m", [(5, 11, Fraction(5, 11), 1), (2, 4, Fraction(1, 2), 2), (3, 6, Fraction(1, 2), 3)])
def test_modified_pair(p, q, t, m):
    mp = modified_pair(p, q)
    assert (mp.t, mp.m) == (t, m)


@given(st.integers(1, 50), st.integers(1, 50))
def test_modified_pair_gcd(p, q):
    mp = modified_pair(p, q)
    assert mp.m == gcd(p, q) and mp.t == Fraction(p, q)


def test_modified_pair_zero():
    mp = modified_pair(0, 3)
    assert mp.degenerate and mp.t == 0
    with pytest.raises(ValueError):
        modified_pair(1, 0)


def test_hull_contains():
    h = MSpaceHull(MSpaceMarker(Fraction(1, 3), 1), MSpaceMarker(Fraction(1, 2), 3))
    assert hull_contains(h, MSpaceMarker(Fraction(2, 5), 7))
    assert hull_contains(h, MSpaceMarker(Fraction(1, 2), 2))
    # 3 heads the order, so every period sits under the marker 3
    assert hull_contains(h, MSpaceMarker(Fraction(1, 2), 5))
    assert not hull_contains(h, MSpaceMarker(Fraction(1, 3), 2))
    assert hull_contains(h, MSpaceMarker(Fraction(1, 3), 1))
    assert not hull_contains(h, MSpaceMarker(Fraction(3, 5), 1))
    assert MSpaceMarker(Fraction(2, 5), 1) in h


def test_pattern_record_serializes_strings():
    rec = pattern_record(parse_pattern(TRIMODAL))
    assert rec["orp"] == [3, 11] and rec["up"] == [5, 11]
    assert rec["mup"] == {"t": "5/11", "m": 1}
    assert rec["modality"] == 3 and rec["sheer"] is False and rec["divergent"] is False


@settings(max_examples=50)
@given(patterns(2, 9))
def test_sheer_forces_equal_numbers(P):
    if is_sheer(P):
        assert over_rotation_pair(P).number == unfolding_pair(P).number
