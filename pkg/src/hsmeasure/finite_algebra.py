"""Atomic finite Boolean algebras.

A set in a :class:`FiniteAlgebra` is stored as a Python ``int`` bit mask:
bit ``i`` is set when atom ``i`` belongs to the set.  Python integers are
unbounded, so the same representation serves any number of atoms.
"""
from __future__ import annotations

import numbers
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

AtomSet = int


def mask_from_indices(indices: Iterable[int]) -> AtomSet:
    mask = 0
    for i in indices:
        i = int(i)
        if i < 0:
            raise ValueError(f"negative atom index {i}")
        mask |= 1 << i
    return mask


def indices_from_mask(mask: AtomSet) -> tuple[int, ...]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


@dataclass(frozen=True)
class FiniteAlgebra:
    """The power set of ``n_atoms`` atoms."""

    n_atoms: int
    atom_labels: tuple[str, ...] | None = None

    def __post_init__(self):
        if int(self.n_atoms) < 1:
            raise ValueError("a finite algebra needs at least one atom")
        if self.atom_labels is not None:
            labels = tuple(str(x) for x in self.atom_labels)
            if len(labels) != self.n_atoms:
                raise ValueError("atom_labels must have one entry per atom")
            object.__setattr__(self, "atom_labels", labels)

    @property
    def full(self) -> AtomSet:
        return (1 << self.n_atoms) - 1

    @property
    def empty(self) -> AtomSet:
        return 0

    def set(self, A=None) -> AtomSet:
        """Normalize ``A`` (mask, iterable of indices, or None for everything)."""
        if A is None:
            return self.full
        if isinstance(A, numbers.Integral) and not isinstance(A, bool):
            mask = int(A)
            if mask < 0:
                raise ValueError("atom masks are nonnegative")
        else:
            mask = mask_from_indices(A)
        if mask >> self.n_atoms:
            bad = [i for i in indices_from_mask(mask) if i >= self.n_atoms]
            raise ValueError(f"atom indices {bad} out of range for {self.n_atoms} atoms")
        return mask

    def atoms(self, A=None) -> tuple[int, ...]:
        return indices_from_mask(self.set(A))

    def complement(self, A) -> AtomSet:
        return self.full & ~self.set(A)

    def subsets(self, A=None) -> Iterator[AtomSet]:
        """Every subset of ``A`` (including the empty set and ``A`` itself)."""
        mask = self.set(A)
        sub = mask
        while True:
            yield sub
            if sub == 0:
                return
            sub = (sub - 1) & mask

    def label(self, i: int) -> str:
        if self.atom_labels is None:
            return str(i)
        return self.atom_labels[i]


def _partitions_with_blocks(atoms: Sequence[int], k: int) -> Iterator[list[AtomSet]]:
    # restricted growth strings with maximum exactly k - 1
    n = len(atoms)
    rgs = [0] * n

    def rec(pos, used):
        if n - pos < k - used:
            return
        if pos == n:
            if used == k:
                blocks = [0] * k
                for atom, b in zip(atoms, rgs):
                    blocks[b] |= 1 << atom
                yield blocks
            return
        for b in range(min(used + 1, k)):
            rgs[pos] = b
            yield from rec(pos + 1, max(used, b + 1))

    yield from rec(0, 0)


def partitions(algebra: FiniteAlgebra, A=None) -> Iterator[list[AtomSet]]:
    """Lazily yield all partitions of ``A`` into nonempty atom subsets.

    Order is refinement first: partitions with more blocks come earlier,
    so the first partition is the singletons and the last is ``[A]``.
    Within a block count the order is that of restricted growth strings.
    The empty set has exactly one partition, the empty one.
    """
    atoms = algebra.atoms(A)
    if not atoms:
        yield []
        return
    for k in range(len(atoms), 0, -1):
        yield from _partitions_with_blocks(atoms, k)


def bell_number(n: int) -> int:
    row = [1]
    for _ in range(n):
        nxt = [row[-1]]
        for x in row:
            nxt.append(nxt[-1] + x)
        row = nxt
    return row[0]


@dataclass(frozen=True)
class ProductAlgebra:
    """Product of two finite algebras; atom ``(i, j)`` has index ``i * right.n_atoms + j``."""

    left: FiniteAlgebra
    right: FiniteAlgebra
    algebra: FiniteAlgebra = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(
            self, "algebra", FiniteAlgebra(self.left.n_atoms * self.right.n_atoms)
        )

    @property
    def n_atoms(self) -> int:
        return self.algebra.n_atoms

    def index(self, i: int, j: int) -> int:
        if not (0 <= i < self.left.n_atoms and 0 <= j < self.right.n_atoms):
            raise ValueError(f"atom ({i}, {j}) out of range")
        return i * self.right.n_atoms + j

    def pair(self, index: int) -> tuple[int, int]:
        return divmod(index, self.right.n_atoms)

    def pairs(self, mask: AtomSet) -> list[tuple[int, int]]:
        return [self.pair(k) for k in self.algebra.atoms(mask)]

    def from_pairs(self, pairs: Iterable[tuple[int, int]]) -> AtomSet:
        return mask_from_indices(self.index(i, j) for i, j in pairs)


def rectangle(prod: ProductAlgebra, a, b) -> AtomSet:
    """The product set ``{(i, j) : i in a, j in b}``."""
    ia = prod.left.atoms(a)
    jb = prod.right.atoms(b)
    mask = 0
    for i in ia:
        for j in jb:
            mask |= 1 << prod.index(i, j)
    return mask
