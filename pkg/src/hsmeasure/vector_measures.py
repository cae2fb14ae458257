"""Scalar and vector measures on finite algebras.

Variation, semi-variation, the subset sup behind the pi-inequality,
a basis-average control measure and a numerical squeezing witness for
countably-atomic orthogonal measures given by truncation.

Inner products are conjugate-linear in the first slot:
``<u, v> = sum(conj(u) * v)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .finite_algebra import AtomSet, FiniteAlgebra
from .sweep import max_subset_modulus_sweep

#: Largest atom count for which subsets are enumerated exhaustively.
SUBSET_CAP = 24

ORTHOGONALITY_TOL = 1e-10


@dataclass(frozen=True)
class OptConfig:
    """Knobs shared by the iterative sup solvers.

    ``gap_tol`` is only used to label results as certified; it never
    changes the value returned.
    """

    restarts: int = 32
    max_iters: int = 500
    tol: float = 1e-10
    gap_tol: float = 1e-8
    seed: int = 0
    enum_cap: int = 20


DEFAULT_CONFIG = OptConfig()


def _as_complex_array(values, ndim):
    arr = np.asarray(values, dtype=np.complex128)
    if arr.ndim != ndim:
        raise ValueError(f"expected a {ndim}-d array, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("values must be finite")
    return arr


@dataclass(frozen=True, eq=False)
class ComplexMeasure:
    algebra: FiniteAlgebra
    atom_values: np.ndarray

    def __post_init__(self):
        vals = _as_complex_array(self.atom_values, 1)
        if len(vals) != self.algebra.n_atoms:
            raise ValueError("need one value per atom")
        vals.setflags(write=False)
        object.__setattr__(self, "atom_values", vals)

    @classmethod
    def from_values(cls, values):
        values = list(values)
        return cls(FiniteAlgebra(len(values)), np.asarray(values))

    def value(self, A=None) -> complex:
        idx = list(self.algebra.atoms(A))
        return complex(self.atom_values[idx].sum()) if idx else 0j

    def restrict(self, A=None) -> np.ndarray:
        return self.atom_values[list(self.algebra.atoms(A))]


@dataclass(frozen=True, eq=False)
class VectorMeasure:
    """Additive map from an atomic algebra into C^dim.

    With ``orthogonal=True`` the atom vectors are checked to be mutually
    orthogonal, relative to their norms, at construction.
    """

    algebra: FiniteAlgebra
    atom_vectors: np.ndarray
    orthogonal: bool = False

    def __post_init__(self):
        vecs = _as_complex_array(self.atom_vectors, 2)
        if vecs.shape[0] != self.algebra.n_atoms:
            raise ValueError("need one vector per atom")
        if vecs.shape[1] < 1:
            raise ValueError("dimension must be at least 1")
        vecs.setflags(write=False)
        object.__setattr__(self, "atom_vectors", vecs)
        if self.orthogonal:
            gram = vecs.conj() @ vecs.T
            norms = np.sqrt(np.abs(np.diag(gram)))
            off = np.abs(gram - np.diag(np.diag(gram)))
            scale = np.maximum(np.outer(norms, norms), 1.0)
            worst = float((off / scale).max()) if len(vecs) > 1 else 0.0
            if worst > ORTHOGONALITY_TOL:
                raise ValueError(f"atoms are not orthogonal (max overlap {worst:.3e})")

    @classmethod
    def from_vectors(cls, vectors, orthogonal=False):
        arr = np.atleast_2d(np.asarray(vectors, dtype=np.complex128))
        return cls(FiniteAlgebra(arr.shape[0]), arr, orthogonal)

    @property
    def dim(self) -> int:
        return self.atom_vectors.shape[1]

    @property
    def is_real(self) -> bool:
        return bool(np.all(self.atom_vectors.imag == 0))

    def value(self, A=None) -> np.ndarray:
        idx = list(self.algebra.atoms(A))
        if not idx:
            return np.zeros(self.dim, dtype=np.complex128)
        return self.atom_vectors[idx].sum(axis=0)

    def vector_norm(self, A=None) -> float:
        return float(np.linalg.norm(self.value(A)))

    def restrict(self, A=None) -> np.ndarray:
        return self.atom_vectors[list(self.algebra.atoms(A))]

    def scaled(self, c) -> "VectorMeasure":
        return VectorMeasure(self.algebra, c * self.atom_vectors, self.orthogonal)

    def transformed(self, U) -> "VectorMeasure":
        """Compose with the linear map ``U`` (matrix acting on column vectors)."""
        U = np.asarray(U, dtype=np.complex128)
        return VectorMeasure(self.algebra, self.atom_vectors @ U.T, False)

    def functional(self, v) -> ComplexMeasure:
        """The scalar measure ``A -> <v, phi(A)>``."""
        v = np.asarray(v, dtype=np.complex128)
        return ComplexMeasure(self.algebra, self.atom_vectors @ v.conj())


@dataclass(frozen=True, eq=False)
class TruncatedMeasure:
    """Orthogonal measure on a countable atomic algebra, kept as finitely many blocks.

    Blocks live in mutually orthogonal subspaces (their own coordinates);
    ``tail_bound`` bounds the norm of everything not enumerated.
    """

    blocks: tuple[tuple[VectorMeasure, float], ...]
    tail_bound: float = 0.0

    def __post_init__(self):
        blocks = tuple((m, float(w)) for m, w in self.blocks)
        for m, w in blocks:
            if not w >= 0.0:
                raise ValueError("block norms must be nonnegative")
            if m.orthogonal:
                actual = m.vector_norm()
                if abs(actual - w) > 1e-8 * max(1.0, w):
                    raise ValueError(f"block norm {w} disagrees with measure norm {actual}")
        if not self.tail_bound >= 0.0:
            raise ValueError("tail_bound must be nonnegative")
        object.__setattr__(self, "blocks", blocks)
        object.__setattr__(self, "tail_bound", float(self.tail_bound))

    @property
    def block_norms(self) -> np.ndarray:
        return np.array([w for _, w in self.blocks], dtype=float)

    def total_norm(self) -> float:
        return math.sqrt(float(np.sum(self.block_norms**2)) + self.tail_bound**2)


# -- scalar measures ---------------------------------------------------------


def variation(lam: ComplexMeasure, A=None) -> float:
    """Sum of the moduli of the atom values in ``A``.

    On an atomic algebra the finest partition attains the sup over
    partitions, by the triangle inequality.
    """
    return float(np.abs(lam.restrict(A)).sum())


def variation_by_partitions(lam: ComplexMeasure, A=None) -> float:
    """The defining sup over every finite partition (Bell-number cost)."""
    from .finite_algebra import partitions

    best = 0.0
    for part in partitions(lam.algebra, A):
        best = max(best, sum(abs(lam.value(block)) for block in part))
    return best


def subset_sup(lam: ComplexMeasure, B=None, method: str = "auto") -> tuple[float, AtomSet]:
    """``max |lam(A)|`` over ``A`` contained in ``B``, with a maximizing set.

    ``"enumerate"`` walks all ``2**|B|`` subsets (at most ``SUBSET_CAP``
    atoms).  ``"sweep"`` uses the exact half-plane characterization of the
    maximizer and has no size limit.  ``"auto"`` enumerates when allowed.
    """
    idx = lam.algebra.atoms(B)
    if method == "auto":
        method = "enumerate" if len(idx) <= SUBSET_CAP else "sweep"
    vals = lam.atom_values[list(idx)]
    if method == "enumerate":
        if len(idx) > SUBSET_CAP:
            raise ValueError(f"subset enumeration capped at {SUBSET_CAP} atoms, got {len(idx)}")
        value, local = kernels.max_subset_modulus(
            np.ascontiguousarray(vals.real), np.ascontiguousarray(vals.imag)
        )
        members = [k for k in range(len(idx)) if (local >> k) & 1]
    elif method == "sweep":
        value, members = max_subset_modulus_sweep(vals)
    else:
        raise ValueError(f"unknown method {method!r}")
    mask = 0
    for k in members:
        mask |= 1 << idx[k]
    return value, mask


def pi_ratio(lam: ComplexMeasure, B=None, method: str = "auto") -> float:
    """``|lam|(B) / sup{|lam(A)| : A in B}``; always at most pi."""
    sup, _ = subset_sup(lam, B, method)
    if sup == 0.0:
        raise ValueError("measure vanishes on B")
    ratio = variation(lam, B) / sup
    assert ratio <= math.pi + 1e-12, ratio
    return ratio


# -- semi-variation ----------------------------------------------------------


@dataclass
class SemivariationResult:
    """Bracket ``value <= |phi|(A) <= upper``.

    ``value`` is attained by ``direction``; ``upper`` is a certificate
    from a diagonal dual bound on the Gram matrix (or exact enumeration).
    """

    value: float
    upper: float
    direction: np.ndarray
    field: str
    method: str
    converged: bool
    iterations: int
    exact: bool = False

    @property
    def gap(self) -> float:
        if self.value == 0.0:
            return 0.0 if self.upper == 0.0 else math.inf
        return self.upper / self.value - 1.0

    def certified(self, gap_tol: float) -> bool:
        return self.exact or self.gap <= gap_tol

    def __float__(self):
        return float(self.value)


def _phase(c):
    mag = np.abs(c)
    out = np.ones_like(c)
    nz = mag > 0
    out[nz] = c[nz] / mag[nz]
    return out


def _sign(c):
    return np.where(c < 0, -1.0, 1.0)


def _objective(v, phi):
    return float(np.abs(phi @ v.conj()).sum())


def _fixed_point(phi, starts, real, cfg):
    """Run ``v <- normalize(sum_i phase(<v, phi_i>)^* phi_i)`` from every start row."""
    V = starts / np.linalg.norm(starts, axis=1, keepdims=True)
    prev = np.full(len(V), -np.inf)
    done = np.zeros(len(V), dtype=bool)
    it = 0
    for it in range(1, cfg.max_iters + 1):
        C = V.conj() @ phi.T
        obj = np.abs(C).sum(axis=1)
        coef = _sign(C.real) if real else _phase(C).conj()
        W = coef @ phi
        norms = np.linalg.norm(W, axis=1)
        ok = norms > 0
        V[ok] = W[ok] / norms[ok, None]
        done = obj - prev <= cfg.tol * (1.0 + obj)
        prev = obj
        if done.all():
            break
    obj = np.abs(V.conj() @ phi.T).sum(axis=1)
    return V, obj, bool(done.all()), it


def _coordinate_polish(phi, v, real, max_rounds=200):
    """Single-coefficient ascent on ``||sum_i alpha_i phi_i||`` from the phases of ``v``."""
    c = phi @ v.conj()
    alpha = _sign(c.real) if real else _phase(c).conj()
    w = alpha @ phi
    for _ in range(max_rounds):
        improved = False
        for i in range(len(phi)):
            rest = w - alpha[i] * phi[i]
            t = np.vdot(phi[i], rest)
            if real:
                new = 1.0 if t.real >= 0 else -1.0
            else:
                new = t / abs(t) if abs(t) > 0 else alpha[i]
            cand = rest + new * phi[i]
            if np.linalg.norm(cand) > np.linalg.norm(w) * (1 + 1e-15):
                alpha[i] = new
                w = cand
                improved = True
        if not improved:
            break
    nw = np.linalg.norm(w)
    if nw == 0:
        return v
    return w / nw


def _gram_certificate(phi, alpha):
    """Upper bound on ``sup_{|a_i| <= 1} ||sum a_i phi_i||`` via ``diag(d) >= G``."""
    G = phi.conj() @ phi.T
    Ga = G @ alpha
    d = np.abs(Ga)
    lam_max = float(np.linalg.eigvalsh(G - np.diag(d)).max())
    shift = max(0.0, lam_max)
    bound_sq = float(d.sum()) + len(phi) * shift
    trivial = float(np.linalg.norm(phi, axis=1).sum())
    return min(math.sqrt(max(bound_sq, 0.0)), trivial)


def semivariation(phi: VectorMeasure, A=None, cfg: OptConfig | None = None,
                  field: str = "auto", method: str = "auto") -> SemivariationResult:
    """Semi-variation ``|phi|(A) = sup_{||v|| <= 1} sum_{i in A} |<v, phi_i>|``.

    ``field`` selects the scalars of the dual ball: ``"real"`` (default for
    real-valued measures) or ``"complex"``.  ``method`` is ``"iterate"``
    (phase fixed point with restarts), ``"enumerate"`` (exact sign
    enumeration, real field only) or ``"auto"``, which enumerates real
    measures with at most ``cfg.enum_cap`` atoms.
    """
    cfg = cfg or DEFAULT_CONFIG
    if field == "auto":
        field = "real" if phi.is_real else "complex"
    if field not in ("real", "complex"):
        raise ValueError(f"unknown field {field!r}")
    real = field == "real"
    if real and not phi.is_real:
        raise ValueError("real field requested for a complex-valued measure")
    atoms = phi.restrict(A)
    atoms = atoms[np.linalg.norm(atoms, axis=1) > 0]
    dim = phi.dim
    if real:
        atoms = atoms.real
    if len(atoms) == 0:
        zero = np.zeros(dim)
        zero[0] = 1.0
        return SemivariationResult(0.0, 0.0, zero, field, "trivial", True, 0, exact=True)

    if method == "auto":
        method = "enumerate" if real and len(atoms) <= cfg.enum_cap else "iterate"
    if method == "enumerate":
        if not real:
            raise ValueError("sign enumeration is exact only over the real field")
        value, signs = kernels.max_sign_norm(np.ascontiguousarray(atoms, dtype=np.float64))
        w = signs.astype(float) @ atoms
        direction = w / np.linalg.norm(w) if value > 0 else np.eye(dim)[0]
        return SemivariationResult(value, value, direction, field, "enumerate", True, 0, exact=True)
    if method != "iterate":
        raise ValueError(f"unknown method {method!r}")

    if len(atoms) == 1:
        n1 = float(np.linalg.norm(atoms[0]))
        return SemivariationResult(n1, n1, atoms[0] / n1, field, "single-atom", True, 0, exact=True)

    rng = np.random.default_rng(cfg.seed)
    total = atoms.sum(axis=0)
    starts = [atoms[int(np.argmax(np.linalg.norm(atoms, axis=1)))]]
    if np.linalg.norm(total) > 0:
        starts.append(total)
    n_random = max(cfg.restarts - len(starts), 0)
    if real:
        rand = rng.standard_normal((n_random, dim))
    else:
        rand = rng.standard_normal((n_random, dim)) + 1j * rng.standard_normal((n_random, dim))
    starts = np.vstack([np.asarray(starts, dtype=rand.dtype), rand]) if n_random else np.asarray(starts)
    V, obj, converged, iters = _fixed_point(atoms, starts.astype(atoms.dtype if real else np.complex128), real, cfg)

    # polish the few best restarts; ties resolved by restart index
    order = np.argsort(-obj, kind="stable")[: min(8, len(obj))]
    best_v, best_val = None, -1.0
    for r in order:
        v = _coordinate_polish(atoms, V[r].copy(), real)
        val = _objective(v, atoms)
        if val > best_val * (1 + 1e-15):
            best_v, best_val = v, val
    c = atoms @ best_v.conj()
    alpha = _sign(c.real) if real else _phase(c).conj()
    upper = max(_gram_certificate(atoms, alpha), best_val)
    exact = upper <= best_val * (1 + 1e-12)
    return SemivariationResult(best_val, upper, best_v, field, "iterate", converged, iters, exact=exact)


def semivariation_by_functionals(phi: VectorMeasure, A=None, samples=2000, seed=0) -> float:
    """Lower bound straight from the definition: sampled unit functionals."""
    rng = np.random.default_rng(seed)
    atoms = phi.restrict(A)
    if phi.is_real:
        V = rng.standard_normal((samples, phi.dim))
    else:
        V = rng.standard_normal((samples, phi.dim)) + 1j * rng.standard_normal((samples, phi.dim))
    V /= np.linalg.norm(V, axis=1, keepdims=True)
    return float(np.abs(V.conj() @ atoms.T).sum(axis=1).max())


def range_sup(phi: VectorMeasure, B=None) -> float:
    """``max ||phi(A)||`` over subsets ``A`` of ``B`` (exhaustive)."""
    idx = phi.algebra.atoms(B)
    if len(idx) > SUBSET_CAP:
        raise ValueError(f"subset enumeration capped at {SUBSET_CAP} atoms")
    best = 0.0
    for sub in phi.algebra.subsets(B):
        best = max(best, phi.vector_norm(sub))
    return best


# -- products and control ----------------------------------------------------


def total_variation_product(xi: VectorMeasure, eta: VectorMeasure, T) -> float:
    """Total variation of ``A x B -> <xi(A), T eta(B)>`` on the product algebra."""
    T = np.asarray(T, dtype=np.complex128)
    if T.ndim != 2 or T.shape != (xi.dim, eta.dim):
        raise ValueError(
            f"operator shape {T.shape} does not map C^{eta.dim} into C^{xi.dim}"
        )
    pairings = xi.atom_vectors.conj() @ T @ eta.atom_vectors.T
    return float(np.abs(pairings).sum())


def control_measure(phi: VectorMeasure, basis=None) -> ComplexMeasure:
    """Average of the variations of the coordinate functionals.

    ``mu(A) = (1/d) sum_k |<b_k, phi>|(A)`` for an orthonormal basis
    ``b_k`` (columns of ``basis``; default standard basis).
    """
    d = phi.dim
    if basis is None:
        coords = phi.atom_vectors
    else:
        B = np.asarray(basis, dtype=np.complex128)
        if B.shape != (d, d) or not np.allclose(B.conj().T @ B, np.eye(d), atol=1e-10):
            raise ValueError("basis must be a unitary d x d matrix")
        coords = phi.atom_vectors @ B.conj()
    weights = np.abs(coords).sum(axis=1) / d
    return ComplexMeasure(phi.algebra, weights.astype(np.complex128))


@dataclass
class ControlReport:
    dominance_ok: bool
    null_ok: bool
    checked_sets: int
    worst_margin: float


def check_control_measure(phi: VectorMeasure, mu: ComplexMeasure, max_atoms: int = 12) -> ControlReport:
    """Check ``mu(A) <= |phi|(A)`` and ``mu(A) = 0 => phi = 0 below A`` on all sets.

    Dominance is certified against ``max_k |<b_k, phi>|(A)``, which is a
    lower bound of the semi-variation, so no optimizer is involved.
    """
    if phi.algebra.n_atoms > max_atoms:
        raise ValueError(f"exhaustive check limited to {max_atoms} atoms")
    coord_var = np.abs(phi.atom_vectors)  # |<e_k, phi_i>|
    mu_vals = mu.atom_values.real
    dom_ok = null_ok = True
    worst = math.inf
    count = 0
    for sub in phi.algebra.subsets():
        idx = list(phi.algebra.atoms(sub))
        count += 1
        m = float(mu_vals[idx].sum()) if idx else 0.0
        lower = float(coord_var[idx].sum(axis=0).max()) if idx else 0.0
        worst = min(worst, lower - m)
        if m > lower + 1e-12 * max(1.0, lower):
            dom_ok = False
        if m == 0.0 and idx and np.any(phi.atom_vectors[idx] != 0):
            null_ok = False
    return ControlReport(dom_ok, null_ok, count, worst)


# -- squeezing ---------------------------------------------------------------


@dataclass
class SqueezingReport:
    tail_norms: list[float]
    monotone: bool
    reaches_tail_bound: bool

    @property
    def passed(self) -> bool:
        return self.monotone and self.reaches_tail_bound


def squeezing_witness(m: TruncatedMeasure) -> SqueezingReport:
    """Norms of the measure of the blocks from ``k`` onward, for every ``k``.

    Blocks are mutually orthogonal, so the norm of a union is the root sum
    of squares.  The last entry is the certified tail bound.
    """
    sq = m.block_norms**2
    tail_sq = m.tail_bound**2
    suffix = np.concatenate([np.cumsum(sq[::-1])[::-1], [0.0]]) + tail_sq
    norms = [float(x) for x in np.sqrt(suffix)]
    monotone = all(a >= b for a, b in zip(norms, norms[1:]))
    reaches = norms[-1] <= m.tail_bound + 1e-15
    return SqueezingReport(norms, monotone, reaches)
