import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hsmeasure.khintchine import (
    L1_CONSTANT,
    SignSum,
    check_lower_constant,
    check_upper_constant,
    elementary_inequality_check,
    exact_moment,
    lower_constant,
    mc_moment,
    rademacher,
    rademacher_patterns,
    standard_corpus,
    table,
    tail_bound_check,
    tail_probabilities,
    upper_constant,
)


def test_rademacher_examples():
    assert rademacher(1, 0.25) == 1
    assert rademacher(2, 0.3) == -1
    assert rademacher(1, 0.75) == -1
    assert rademacher(1, 1.25) == 1  # period one
    for k in (0, 63):
        with pytest.raises(ValueError):
            rademacher(k, 0.1)


@pytest.mark.parametrize("n", [1, 4, 10, 16])
def test_rademacher_identification(n):
    P = rademacher_patterns(n)
    assert len({r.tobytes() for r in P}) == 1 << n
    rng = np.random.default_rng(n)
    for i in rng.integers(0, 1 << n, size=20):
        t = (i + 0.5) / (1 << n)
        assert [rademacher(k, t) for k in range(1, n + 1)] == list(P[i])


def test_exact_moment_examples():
    assert exact_moment([1], 3.7) == pytest.approx(1)
    assert exact_moment([1, 1], 1) == pytest.approx(1)
    assert exact_moment([1, 1], 2) == pytest.approx(math.sqrt(2))
    with pytest.raises(ValueError):
        exact_moment(np.ones(25), 2)
    with pytest.raises(ValueError):
        exact_moment([1], 0.5)
    with pytest.raises(ValueError):
        SignSum([])


def test_p2_moment_is_l2_norm(rng):
    for _ in range(100):
        n = int(rng.integers(1, 17))
        a = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        assert abs(exact_moment(a, 2) - np.linalg.norm(a)) <= 1e-12


@settings(max_examples=40, deadline=None)
@given(st.lists(st.floats(-10, 10), min_size=1, max_size=10))
def test_moments_increase_with_p(a):
    if np.linalg.norm(a) == 0:
        return
    ms = [exact_moment(a, p) for p in (1, 1.5, 2, 3, 4)]
    assert all(x <= y * (1 + 1e-12) + 1e-300 for x, y in zip(ms, ms[1:]))


def test_mc_moment():
    assert mc_moment([1], 2, 100, 0) == (1.0, 0.0)
    est, se = mc_moment([1, 1], 2, 100_000, seed=3)
    assert abs(est - 2) <= 3 * se
    assert mc_moment([1, 2, 3], 3, 5000, 9) == mc_moment([1, 2, 3], 3, 5000, 9)
    with pytest.raises(ValueError):
        mc_moment([1], 2, 0)


def test_mc_agrees_with_exact(rng):
    for _ in range(5):
        n = int(rng.integers(1, 13))
        a = rng.standard_normal(n)
        est, se = mc_moment(a, 3, 50_000, seed=n)
        assert abs(est - exact_moment(a, 3) ** 3) <= 4 * se


def test_constants():
    assert upper_constant(4) == pytest.approx(2 * math.sqrt(2))
    assert lower_constant(1) == pytest.approx(L1_CONSTANT) == pytest.approx(12 * math.sqrt(math.pi))
    with pytest.raises(ValueError):
        lower_constant(2)


def test_upper_constant_checks():
    r = check_upper_constant([1], 4)
    assert r.ratio == pytest.approx(1) and r.passed
    r = check_upper_constant([1, 1, 1, 1], 4)
    assert r.passed and r.ratio < r.bound
    r = check_upper_constant([100, 0.01, 0.01], 3)
    assert r.ratio == pytest.approx(1, abs=1e-3)
    with pytest.raises(ValueError):
        check_upper_constant([1], 2)


def test_lower_constant_checks():
    assert check_lower_constant([1], 1).passed
    r = check_lower_constant([1, 1], 1)
    assert r.moment == pytest.approx(1) and r.ratio == pytest.approx(math.sqrt(2)) and r.passed
    assert check_lower_constant(np.ones(8), 1).passed


def test_constants_on_corpus():
    for a in standard_corpus():
        for p in (3, 4, 5.5):
            assert check_upper_constant(a, p).passed
        for p in (1, 1.25, 1.5, 1.9):
            assert check_lower_constant(a, p).passed


def test_tail_examples():
    r = tail_bound_check([1], [2.0])
    assert r.tail == [0.0] and r.passed
    r = tail_bound_check([1, 1], [1.5])
    assert r.tail == [0.5]
    assert r.bound[0] == pytest.approx(2 * math.exp(-9 / 16))
    r = tail_bound_check([1, 2, 3], [0.0])
    assert r.tail[0] <= 1 <= 2 == r.bound[0]
    with pytest.raises(ValueError):
        tail_probabilities([1j], [1.0])


def test_tail_bound_on_corpus():
    for a in standard_corpus():
        a = np.real(a)
        if np.linalg.norm(a) == 0:
            continue
        assert tail_bound_check(a, np.linspace(0, 5 * np.linalg.norm(a), 40)).passed


def test_tail_unsorted_grid():
    p = tail_probabilities([1, 1], [1.5, 0.0, 3.0])
    assert list(p) == [0.5, 0.5, 0.0]


def test_elementary_inequality():
    r = elementary_inequality_check([0, 1, 10, -3, 800])
    assert r.passed
    assert r.margin[0] == 0
    assert math.e + 1 / math.e <= 2 * math.exp(0.5)


def test_table_rows():
    rows = table([1, 1.5, 2, 3, 4])
    assert [r.kind for r in rows] == ["lower", "lower", "exact", "upper", "upper"]
    assert all(r.passed for r in rows)
    assert all(r.max_ratio <= r.bound + 1e-12 for r in rows)
