import math

import numpy as np
import pytest

from hsmeasure.half_average import (
    HalfAverageConfig,
    VectorFamily,
    ascent_check,
    cd_closed_form,
    estimate_cd,
    half_average_subset,
)


def test_closed_form_constants():
    assert cd_closed_form(1) == pytest.approx(0.5)
    assert cd_closed_form(2) == pytest.approx(1 / math.pi)
    assert cd_closed_form(3) == pytest.approx(0.25)


def test_single_vector():
    r = half_average_subset(VectorFamily.from_vectors([[1.0, 0.0]]))
    assert r.J == (0,) and r.ratio == pytest.approx(1)


def test_opposite_pair():
    r = half_average_subset(VectorFamily.from_vectors([[1.0, 0.0], [-1.0, 0.0]]))
    assert r.ratio == pytest.approx(0.5) and len(r.J) == 1


def test_equal_angles_approach_one_over_pi():
    a = np.linspace(0, 2 * np.pi, 720, endpoint=False)
    r = half_average_subset(VectorFamily.from_vectors(np.c_[np.cos(a), np.sin(a)]))
    assert r.ratio == pytest.approx(1 / math.pi, rel=1e-4)
    assert r.ratio >= 1 / math.pi


def test_one_dimensional():
    r = half_average_subset(VectorFamily.from_vectors([1.0, -1.0, 2.0], d=1))
    assert r.ratio == pytest.approx(0.75)
    r = half_average_subset(VectorFamily.from_vectors([1.0, -1.0], d=1))
    assert r.ratio == pytest.approx(0.5)


def test_zero_vectors_dropped_and_indices_kept():
    fam = VectorFamily.from_vectors([[0, 0], [0, 2.0], [0, 0]])
    assert len(fam) == 1
    assert half_average_subset(fam).J == (1,)
    with pytest.raises(ValueError):
        half_average_subset(VectorFamily.from_vectors([[0.0, 0.0]]))


def test_ties_are_excluded():
    # e0 = (1, 0) is optimal and (0, 1) sits on the boundary
    fam = VectorFamily.from_vectors([[1.0, 0.0], [0.0, 1.0], [0.0, -1.0]])
    r = half_average_subset(fam)
    assert all(fam.vectors[list(r.J)] @ r.e0 > 0)


def test_random_families(rng):
    for _ in range(300):
        d = int(rng.integers(1, 6))
        fam = VectorFamily.from_vectors(rng.standard_normal((int(rng.integers(1, 51)), d)), d)
        r = half_average_subset(fam, HalfAverageConfig(seed=1))
        assert r.ratio >= cd_closed_form(d)
        assert ascent_check(fam, r.e0, 500, seed=2) >= -1e-12
        # |sum_J v| >= g(e0)
        assert np.linalg.norm(fam.vectors[list(r.J)].sum(axis=0)) >= r.g_value - 1e-12


@pytest.mark.parametrize("d,target", [(2, 1 / math.pi), (3, 0.25), (5, None)])
def test_estimate_cd(d, target):
    e = estimate_cd(d, 200_000, seed=d)
    assert abs(e.estimate - e.closed_form) <= 4 * e.stderr
    if target:
        assert e.closed_form == pytest.approx(target)
    assert estimate_cd(d, 1000, seed=4) == estimate_cd(d, 1000, seed=4)


def test_estimate_cd_rejects_d1():
    with pytest.raises(ValueError):
        estimate_cd(1)


def test_bad_family_shape():
    with pytest.raises(ValueError):
        VectorFamily.from_vectors(np.ones((3, 2)), d=3)
    with pytest.raises(ValueError):
        VectorFamily.from_vectors([[np.inf, 0]])
