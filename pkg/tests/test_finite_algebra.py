import itertools

import pytest

from hsmeasure.finite_algebra import (
    FiniteAlgebra,
    ProductAlgebra,
    bell_number,
    indices_from_mask,
    mask_from_indices,
    partitions,
    rectangle,
)


def test_mask_roundtrip():
    assert mask_from_indices([0, 3, 5]) == 0b101001
    assert indices_from_mask(0b101001) == (0, 3, 5)
    assert indices_from_mask(0) == ()


def test_large_algebra_uses_plain_ints():
    alg = FiniteAlgebra(100)
    A = alg.set([0, 99])
    assert alg.atoms(A) == (0, 99)
    assert alg.complement(A) == alg.full & ~A


@pytest.mark.parametrize("bad", [0, -1])
def test_needs_an_atom(bad):
    with pytest.raises(ValueError):
        FiniteAlgebra(bad)


def test_set_normalization_and_errors():
    alg = FiniteAlgebra(4)
    assert alg.set(None) == 0b1111
    assert alg.set([1, 2]) == 0b0110
    assert alg.set(0b0101) == 0b0101
    with pytest.raises(ValueError):
        alg.set([4])
    with pytest.raises(ValueError):
        alg.set(0b10000)
    with pytest.raises(ValueError):
        alg.set(-1)


def test_labels():
    alg = FiniteAlgebra(2, ("a", "b"))
    assert alg.label(1) == "b"
    assert FiniteAlgebra(2).label(1) == "1"
    with pytest.raises(ValueError):
        FiniteAlgebra(2, ("a",))


def test_subsets_enumerates_power_set():
    alg = FiniteAlgebra(5)
    subs = list(alg.subsets(0b10110))
    assert len(subs) == 8 and len(set(subs)) == 8
    assert all(s & ~0b10110 == 0 for s in subs)


@pytest.mark.parametrize("n", range(0, 8))
def test_partition_count_is_bell(n):
    alg = FiniteAlgebra(max(n, 1))
    A = alg.set(range(n))
    parts = list(partitions(alg, A))
    assert len(parts) == bell_number(n)
    keys = {tuple(sorted(p)) for p in parts}
    assert len(keys) == len(parts)
    for p in parts:
        union = 0
        for block in p:
            assert block and union & block == 0
            union |= block
        assert union == A


def test_partition_order_refinement_first():
    alg = FiniteAlgebra(4)
    parts = list(partitions(alg))
    assert parts[0] == [1, 2, 4, 8]
    assert parts[-1] == [alg.full]
    sizes = [len(p) for p in parts]
    assert sizes == sorted(sizes, reverse=True)


def test_partitions_of_empty_set():
    assert list(partitions(FiniteAlgebra(3), 0)) == [[]]


def test_partitions_are_lazy():
    it = partitions(FiniteAlgebra(30))
    first = next(it)
    assert len(first) == 30


def test_bell_numbers():
    assert [bell_number(n) for n in range(7)] == [1, 1, 2, 5, 15, 52, 203]


def test_product_algebra():
    prod = ProductAlgebra(FiniteAlgebra(2), FiniteAlgebra(3))
    assert prod.n_atoms == 6
    assert [prod.pair(k) for k in range(6)] == list(itertools.product(range(2), range(3)))
    assert prod.from_pairs([(1, 2)]) == 1 << 5
    R = rectangle(prod, [1], [0, 2])
    assert sorted(prod.pairs(R)) == [(1, 0), (1, 2)]
    with pytest.raises(ValueError):
        prod.index(2, 0)
