import math

import numpy as np
import pytest

from hsmeasure.tensor_norms import (
    KHINTCHINE_L1_CONSTANT,
    FamilyConfig,
    Representation,
    TensorElement,
    cross_norms,
    family_ratio,
    hs_norm,
    injective_norm,
    khintchine_summing_check,
    l_norm_bounds,
    p_summing_lower_bound,
    p_summing_profile,
    projective_norm,
    projective_upper_by_jacobi,
    r_norm_bounds,
    reweighted_ratio,
    sample_families,
    verify_profile,
    weak_l1_norm,
    weak_p_norm_upper,
)
from hsmeasure.vector_measures import OptConfig


def rand_tensor(rng, m, n):
    return TensorElement(rng.standard_normal((m, n)) + 1j * rng.standard_normal((m, n)))


def test_elementary_tensor_all_norms_equal(rng):
    x = rng.standard_normal(3) + 1j * rng.standard_normal(3)
    y = rng.standard_normal(4)
    z = TensorElement.elementary(x, y)
    target = np.linalg.norm(x) * np.linalg.norm(y)
    rep = cross_norms(z, search_steps=5)
    for v in (rep.injective, rep.projective, rep.hilbert_schmidt, *rep.l, *rep.r, *rep.m):
        assert abs(v - target) <= 1e-10


def test_identity_tensor():
    z = TensorElement(np.eye(3))
    assert injective_norm(z) == pytest.approx(1)
    assert projective_norm(z) == pytest.approx(3)
    assert hs_norm(np.eye(3)) == pytest.approx(math.sqrt(3))


def test_sandwich(rng):
    cfg = OptConfig(restarts=8, seed=0)
    for _ in range(40):
        m, n = (int(v) for v in rng.integers(1, 6, 2))
        z = rand_tensor(rng, m, n)
        inj, proj = injective_norm(z), projective_norm(z)
        for b in (l_norm_bounds(z, cfg, 5), r_norm_bounds(z, cfg, 5)):
            assert inj - 1e-8 <= b.lower <= b.upper <= proj + 1e-8
            assert b.upper <= hs_norm(z.coeffs) + 1e-10
            assert b.representation.reproduces(z)


def test_l_upper_certifies_its_representation(rng):
    z = rand_tensor(rng, 3, 3)
    b = l_norm_bounds(z, search_steps=10)
    from hsmeasure.vector_measures import VectorMeasure, semivariation

    res = semivariation(VectorMeasure.from_vectors(b.representation.l_atoms()), field="complex")
    assert res.value <= b.upper + 1e-9


def test_r_is_l_of_transpose(rng):
    z = rand_tensor(rng, 2, 4)
    a = r_norm_bounds(z, search_steps=5)
    b = l_norm_bounds(z.transpose(), search_steps=5)
    assert (a.lower, a.upper) == (b.lower, b.upper)


def test_zero_tensor():
    b = l_norm_bounds(TensorElement(np.zeros((2, 2))))
    assert (b.lower, b.upper) == (0.0, 0.0)


def test_jacobi_oracle_matches_trace_norm(rng):
    for shape in [(1, 1), (3, 3), (2, 5), (5, 2)]:
        z = rand_tensor(rng, *shape)
        cost, rep = projective_upper_by_jacobi(z)
        assert rep.reproduces(z)
        assert cost == pytest.approx(projective_norm(z), rel=1e-10)


def test_representation_helpers():
    rep = Representation([(np.array([1.0, 0]), np.array([2.0])), (np.array([0, 1.0]), np.array([3.0]))])
    z = TensorElement.from_pairs(rep.pairs)
    assert rep.reproduces(z)
    assert rep.projective_cost() == 5.0
    with pytest.raises(ValueError):
        Representation([]).tensor()
    with pytest.raises(ValueError):
        TensorElement(np.zeros(3))


def test_weak_norm_exact_cases():
    k, n = 4, 4
    I = np.eye(n)
    for p in (1.0, 1.5, 2.0, 3.0):
        want = 1.0 if p >= 2 else k ** (1 / p - 0.5)
        assert weak_p_norm_upper(I, p) == pytest.approx(want)
        u = np.array([0.6, 0.8, 0, 0])
        assert weak_p_norm_upper(np.tile(u, (k, 1)), p) == pytest.approx(k ** (1 / p))


def test_weak_norm_is_an_upper_bound(rng):
    for _ in range(20):
        V = rng.standard_normal((5, 3))
        for p in (1.0, 1.5, 3.0):
            W = rng.standard_normal((2000, 3))
            W /= np.linalg.norm(W, axis=1)[:, None]
            sampled = (np.abs(W @ V.T) ** p).sum(axis=1).max() ** (1 / p)
            assert sampled <= weak_p_norm_upper(V, p) + 1e-12


def test_p2_summing_equals_hs(rng):
    for _ in range(20):
        n = int(rng.integers(1, 7))
        T = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        r = p_summing_lower_bound(T, 2)
        assert abs(r.value - hs_norm(T)) <= 1e-8


def test_raw_ratios_need_the_envelope():
    T = np.diag([3.0, 4.0])
    fams = sample_families(T)
    prof = p_summing_profile(T, [1.0, 2.0], fams)
    assert prof.raw[0] < prof.raw[1]
    assert prof.bounds[0] == prof.bounds[1] == pytest.approx(5.0)
    assert verify_profile(T, prof, fams) <= 1e-12


def test_reweighted_certificate(rng):
    T = rng.standard_normal((3, 3))
    V = rng.standard_normal((4, 3))
    assert reweighted_ratio(T, V, 1.5, 3.0) == pytest.approx(family_ratio(T, V, 3.0), rel=1e-12)


def test_profile_non_increasing(rng):
    for _ in range(10):
        T = rng.standard_normal((4, 4))
        prof = p_summing_profile(T, [1, 1.5, 2, 2.5, 3, 4], FamilyConfig(seed=3))
        assert all(a >= b for a, b in zip(prof.bounds, prof.bounds[1:]))


def test_p_must_be_at_least_one():
    with pytest.raises(ValueError):
        p_summing_lower_bound(np.eye(2), 0.5)


def test_l1_to_l2_summing_examples():
    assert weak_l1_norm([[1.0, 0.0]]) == 1.0
    rep = khintchine_summing_check(families=[np.eye(2)[:1], np.eye(2)])
    assert rep.ratios == [1.0, 1.0]
    rep = khintchine_summing_check(dims=6, family_size=4, samples=60)
    assert rep.passed and rep.max_ratio <= KHINTCHINE_L1_CONSTANT
    with pytest.raises(ValueError):
        khintchine_summing_check(dims=25)
