import random

import pytest

from unfold.suites import SUITES, random_lift, random_monotone_lift, suite_interval

SMALL = {
    "routes": dict(max_q=6),
    "comparison": dict(max_q=6),
    "pouring": dict(count=10),
    "rotation": dict(pairs=5, max_den=16),
    "divergent": dict(max_q=10, extended=True),
    "sharkovsky": dict(max_q=4, N=5),
    "minimal": dict(max_q=4),
}


@pytest.mark.parametrize("name", sorted(SMALL))
def test_small_suites_pass(name):
    r = SUITES[name](**SMALL[name])
    assert r.passed, r.failures
    assert r.cases > 0 and r.summary().startswith("PASS")


def test_interval_suite_flags_only_max_right_of_min():
    r = suite_interval(max_q=5, N=6)
    assert r.extra["outside"] == 0
    assert r.extra["upper_failures"] and all(P.max_pos > P.min_pos for P in r.extra["upper_failures"])


def test_generators_are_seeded():
    a = [random_lift(random.Random(3)) for _ in range(2)]
    b = [random_lift(random.Random(3)) for _ in range(2)]
    assert a == b
    assert random_monotone_lift(random.Random(5)).is_nondecreasing()
