from fractions import Fraction as Fr

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from unfold.patterns import all_patterns, parse_pattern
from unfold.plmap import (
    DomainError,
    PLMap,
    RationalInterval,
    compose,
    evaluate,
    extrema,
    fixed_points,
    identity,
    iterate,
    least_period,
    p_linear_map,
    periodic_orbits,
)

F3 = p_linear_map(parse_pattern("(1 2 3)"))
F2 = p_linear_map(parse_pattern("(1 2)"))
TENT = PLMap([(0, 0), (Fr(1, 2), 1), (1, 0)])


def necklaces(k):
    """Orbits of least period k of the full 2-branch tent map."""
    def mu(n):
        res, d = 1, 2
        while d * d <= n:
            if n % d == 0:
                n //= d
                if n % d == 0:
                    return 0
                res = -res
            d += 1
        return -res if n > 1 else res

    return sum(mu(k // d) * 2**d for d in range(1, k + 1) if k % d == 0) // k


@st.composite
def interval_maps(draw, max_nodes=6, den=12):
    k = draw(st.integers(2, max_nodes))
    inner = sorted(draw(st.sets(st.integers(1, den - 1), min_size=k - 2, max_size=k - 2)))
    xs = [Fr(0)] + [Fr(i, den) for i in inner] + [Fr(1)]
    ys = [Fr(draw(st.integers(0, den)), den) for _ in xs]
    return PLMap(zip(xs, ys))


points = st.integers(0, 60).map(lambda n: Fr(n, 60))


def test_p_linear_map_nodes():
    assert list(F3.nodes) == [(0, Fr(1, 2)), (Fr(1, 2), 1), (1, 0)]
    assert list(F2.nodes) == [(0, 1), (1, 0)]
    T = p_linear_map(parse_pattern("(1,2,5,7,10,3,6,8,9,4,11)"))
    assert T.xs == tuple(Fr(k, 10) for k in range(11))
    assert T.ys == tuple(Fr(v - 1, 10) for v in (2, 5, 6, 11, 7, 8, 10, 9, 4, 3, 1))


def test_evaluate_examples():
    assert evaluate(F3, Fr(1, 4)) == Fr(3, 4)
    assert evaluate(F3, Fr(1, 2)) == 1
    assert evaluate(F2, Fr(1, 3)) == Fr(2, 3)
    with pytest.raises(DomainError):
        F3(Fr(3, 2))


def test_iterate_examples():
    assert iterate(F2, 2) == identity()
    assert iterate(F3, 1) == F3


@settings(max_examples=60)
@given(interval_maps(), interval_maps(), points)
def test_compose_is_pointwise(F, G, x):
    assert compose(F, G)(x) == F(G(x))


@settings(max_examples=40)
@given(interval_maps(max_nodes=4), st.integers(1, 5), points)
def test_iterate_is_repeated_evaluation(F, n, x):
    y = x
    for _ in range(n):
        y = F(y)
    assert iterate(F, n)(x) == y


def test_fixed_point_examples():
    assert fixed_points(F3) == [Fr(2, 3)]
    assert fixed_points(F2) == [Fr(1, 2)]
    assert fixed_points(identity()) == [RationalInterval(Fr(0), Fr(1))]


@settings(max_examples=60)
@given(interval_maps())
def test_fixed_points_are_fixed(F):
    for fp in fixed_points(F):
        if isinstance(fp, RationalInterval):
            for x in (fp.lo, fp.midpoint, fp.hi):
                assert F(x) == x
        else:
            assert F(fp) == fp


def test_extrema_examples():
    e = extrema(F3)
    assert (e.argmax, e.argmin, e.max_unique, e.min_unique) == (Fr(1, 2), 1, True, True)
    e = extrema(F2)
    assert (e.argmax, e.argmin) == (0, 1)
    e = extrema(p_linear_map(parse_pattern("(1,2,5,7,10,3,6,8,9,4,11)")))
    assert (e.argmax, e.argmin) == (Fr(3, 10), 1)


def _orbit_sets(F, N, engine="auto"):
    return {(o.period, frozenset(o.points), o.isolated) for o in periodic_orbits(F, N, engine)}


def test_periodic_orbit_examples():
    # 1/2 is an isolated fixed point; every other point has period 2
    assert _orbit_sets(F2, 2) == {(1, frozenset({Fr(1, 2)}), True), (2, frozenset({Fr(0), Fr(1)}), False)}
    assert _orbit_sets(F3, 1) == {(1, frozenset({Fr(2, 3)}), True)}
    assert _orbit_sets(F3, 3) == {
        (1, frozenset({Fr(2, 3)}), True),
        (2, frozenset({Fr(1, 3), Fr(5, 6)}), True),
        (3, frozenset({Fr(0), Fr(1, 2), Fr(1)}), True),
    }
    ident = periodic_orbits(identity(), 3)
    assert len(ident) == 1 and ident[0].period == 1 and not ident[0].isolated


@pytest.mark.parametrize("engine", ["generic", "grid"])
def test_tent_map_orbit_counts(engine):
    orbits = periodic_orbits(TENT, 6, engine)
    for k in range(1, 7):
        assert sum(1 for o in orbits if o.period == k) == necklaces(k)


@pytest.mark.parametrize("q", [3, 4, 5])
def test_engines_agree(q):
    for P in all_patterns(q):
        f = p_linear_map(P)
        assert _orbit_sets(f, 5, "grid") == _orbit_sets(f, 5, "generic"), P


@settings(max_examples=30)
@given(interval_maps(max_nodes=5))
def test_orbits_are_genuine(F):
    for o in periodic_orbits(F, 4):
        x = o.points[0]
        assert x == min(o.points)
        assert least_period(F, x, 4) == o.period
        assert len(set(o.points)) == o.period


def test_json_round_trip():
    assert PLMap.from_json(F3.to_json()) == F3
    assert F3.to_json()[0] == ["0/1", "1/2"]


def test_simplify_equality():
    assert PLMap([(0, 0), (Fr(1, 2), Fr(1, 2)), (1, 1)]) == identity()
    assert hash(PLMap([(0, 0), (Fr(1, 3), Fr(1, 3)), (1, 1)])) == hash(identity())
