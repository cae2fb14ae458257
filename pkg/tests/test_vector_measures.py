import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hsmeasure.finite_algebra import FiniteAlgebra
from hsmeasure.vector_measures import (
    ComplexMeasure,
    OptConfig,
    TruncatedMeasure,
    VectorMeasure,
    check_control_measure,
    control_measure,
    pi_ratio,
    range_sup,
    semivariation,
    semivariation_by_functionals,
    squeezing_witness,
    subset_sup,
    total_variation_product,
    variation,
    variation_by_partitions,
)

complex_values = st.lists(
    st.complex_numbers(max_magnitude=1e3, allow_nan=False, allow_infinity=False), min_size=1, max_size=9
)


@settings(max_examples=60, deadline=None)
@given(complex_values)
def test_variation_matches_partition_definition(vals):
    lam = ComplexMeasure.from_values(vals)
    assert variation(lam) == pytest.approx(variation_by_partitions(lam), rel=1e-12, abs=1e-12)


@settings(max_examples=100, deadline=None)
@given(complex_values)
def test_pi_inequality(vals):
    lam = ComplexMeasure.from_values(vals)
    sup, _ = subset_sup(lam)
    assert variation(lam) <= math.pi * sup + 1e-10 * max(1.0, variation(lam))


@settings(max_examples=100, deadline=None)
@given(complex_values)
def test_sweep_agrees_with_enumeration(vals):
    lam = ComplexMeasure.from_values(vals)
    a, _ = subset_sup(lam, method="enumerate")
    b, mask = subset_sup(lam, method="sweep")
    assert b == pytest.approx(a, rel=1e-12, abs=1e-9)
    assert abs(lam.value(mask)) == pytest.approx(b, rel=1e-12, abs=1e-9)


def test_subset_sup_examples():
    lam = ComplexMeasure.from_values([1, -1])
    assert subset_sup(lam)[0] == 1.0
    assert pi_ratio(lam) == 2.0
    assert pi_ratio(ComplexMeasure.from_values([2 + 0j])) == 1.0


def test_64_phase_instance_close_to_pi():
    lam = ComplexMeasure.from_values(np.exp(2j * np.pi * np.arange(64) / 64))
    r = pi_ratio(lam)
    assert 3.0 <= r <= math.pi


def test_many_atoms_use_sweep():
    lam = ComplexMeasure.from_values(np.exp(2j * np.pi * np.arange(200) / 200))
    assert pi_ratio(lam) <= math.pi
    with pytest.raises(ValueError):
        subset_sup(lam, method="enumerate")


def test_pi_ratio_zero_measure():
    with pytest.raises(ValueError):
        pi_ratio(ComplexMeasure.from_values([0, 0]))


def test_orthogonal_measure_semivariation_is_norm(rng):
    for _ in range(30):
        d = int(rng.integers(1, 6))
        Q, _ = np.linalg.qr(rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d)))
        phi = VectorMeasure.from_vectors(Q.T * rng.exponential(size=d)[:, None], orthogonal=True)
        r = semivariation(phi)
        assert abs(r.value - phi.vector_norm()) <= 1e-8
        assert r.upper >= r.value


def test_orthogonality_flag_is_checked():
    with pytest.raises(ValueError):
        VectorMeasure.from_vectors([[1, 0], [1, 1]], orthogonal=True)


def test_semivariation_examples():
    phi = VectorMeasure.from_vectors([[1, 0], [0, 1]])
    assert semivariation(phi).value == pytest.approx(math.sqrt(2))
    phi = VectorMeasure.from_vectors([[1, 0], [-1, 0]])
    r = semivariation(phi)
    assert r.value == pytest.approx(2.0)
    assert phi.vector_norm() == 0.0
    assert semivariation(phi, A=[]).value == 0.0


def test_iterate_matches_enumeration_and_brackets(rng):
    hits = 0
    for _ in range(150):
        n = int(rng.integers(2, 15))
        d = int(rng.integers(1, 5))
        phi = VectorMeasure.from_vectors(rng.standard_normal((n, d)))
        exact = semivariation(phi, method="enumerate").value
        it = semivariation(phi, method="iterate")
        assert it.value <= exact + 1e-9
        assert it.upper >= exact - 1e-9
        hits += abs(it.value - exact) <= 1e-8
    assert hits >= 148


def test_complex_field_semivariation_brackets(rng):
    for _ in range(30):
        n, d = int(rng.integers(2, 8)), int(rng.integers(1, 4))
        phi = VectorMeasure.from_vectors(rng.standard_normal((n, d)) + 1j * rng.standard_normal((n, d)))
        r = semivariation(phi, cfg=OptConfig(seed=1))
        sampled = semivariation_by_functionals(phi, samples=500)
        assert sampled <= r.value + 1e-9 <= r.upper + 2e-9
        assert range_sup(phi) <= r.value + 1e-9


def test_enumeration_requires_real_field():
    phi = VectorMeasure.from_vectors([[1j, 0]])
    with pytest.raises(ValueError):
        semivariation(phi, method="enumerate")
    with pytest.raises(ValueError):
        semivariation(phi, field="real")


def test_total_variation_product_shape():
    xi = VectorMeasure.from_vectors(np.eye(2))
    eta = VectorMeasure.from_vectors(np.eye(3))
    assert total_variation_product(xi, eta, np.ones((2, 3))) == 6.0
    with pytest.raises(ValueError):
        total_variation_product(xi, eta, np.ones((3, 2)))


def test_control_measure(rng):
    phi = VectorMeasure.from_vectors(rng.standard_normal((6, 3)) * (rng.random((6, 1)) < 0.7))
    mu = control_measure(phi)
    rep = check_control_measure(phi, mu)
    assert rep.dominance_ok and rep.null_ok and rep.checked_sets == 64
    with pytest.raises(ValueError):
        check_control_measure(VectorMeasure.from_vectors(np.ones((13, 1))), mu)


def test_squeezing_witness():
    blocks = []
    for k in range(1, 5):
        v = np.zeros((1, 4))
        v[0, k - 1] = 1 / k
        blocks.append((VectorMeasure.from_vectors(v, orthogonal=True), 1 / k))
    m = TruncatedMeasure(tuple(blocks), tail_bound=0.1)
    rep = squeezing_witness(m)
    assert rep.passed
    assert rep.tail_norms[-1] == pytest.approx(0.1)
    assert m.total_norm() == pytest.approx(math.sqrt(sum(1 / k**2 for k in range(1, 5)) + 0.01))


def test_truncated_measure_validates_norms():
    phi = VectorMeasure.from_vectors([[1.0, 0]], orthogonal=True)
    with pytest.raises(ValueError):
        TruncatedMeasure(((phi, 2.0),))
    with pytest.raises(ValueError):
        TruncatedMeasure(((phi, 1.0),), tail_bound=-1)


def test_measure_restriction():
    alg = FiniteAlgebra(3)
    lam = ComplexMeasure(alg, [1, 2j, -3])
    assert lam.value([0, 1]) == 1 + 2j
    assert variation(lam, [1, 2]) == 5.0
