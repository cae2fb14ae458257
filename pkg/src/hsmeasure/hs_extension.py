"""Orthogonal measures realizing ``||(xi|T eta)|| = ||T||_2`` and what follows.

For positive ``T = sum_k t_k |g_k><g_k|`` put ``eta_k = (t_k/||t||) g_k`` and
``xi_j = e_j / sqrt(n)``, where ``{e_j}`` is the basis with
``|(e_j|g_k)| = 1/sqrt(n)`` for all ``j, k`` (a DFT, or for real spaces of
dimension ``2^m`` a tensor power of the 45 degree rotation).  Every pairing
``(xi_j|T eta_k)`` then has modulus ``t_k^2 / (n ||t||)`` and they sum to
``||t|| = ||T||_2``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import expm
from scipy.special import zeta

from .vector_measures import TruncatedMeasure, VectorMeasure, total_variation_product

PSD_TOL = 1e-10
VARIANTS = ("complex-dft", "real-hadamard")
MAX_BLOCK_DIM = 4096
OPTIMALITY_CAP = 6


def dft_matrix(n: int) -> np.ndarray:
    idx = np.arange(n)
    return np.exp(2j * np.pi * np.outer(idx, idx) / n) / math.sqrt(n)


def hadamard_matrix(n: int) -> np.ndarray:
    """``R^{(x) m}`` for ``R = [[1, -1], [1, 1]] / sqrt(2)``; ``n = 2^m``."""
    if n < 1 or n & (n - 1):
        raise ValueError(f"the real variant needs a power-of-two dimension, got {n}")
    R = np.array([[1.0, -1.0], [1.0, 1.0]]) / math.sqrt(2)
    H = np.ones((1, 1))
    while H.shape[0] < n:
        H = np.kron(H, R)
    return H


def _normalize_phase(vecs):
    # columns: make the first non-negligible entry real and positive
    out = vecs.copy()
    for k in range(out.shape[1]):
        col = out[:, k]
        i = int(np.argmax(np.abs(col) > 1e-12 * np.abs(col).max()))
        out[:, k] = col * (abs(col[i]) / col[i])
    return out


def spectral_decomposition(T, tol: float = PSD_TOL):
    """Eigenpairs of a positive semidefinite matrix in a reproducible order.

    Eigenvalues above ``-tol * max(1, ||T||)`` are clipped to zero; anything
    more negative is rejected.  Order is descending eigenvalue, ties broken
    lexicographically on the phase-normalized components.
    """
    T = np.asarray(T, dtype=np.complex128)
    if T.ndim != 2 or T.shape[0] != T.shape[1]:
        raise ValueError(f"positive operator must be square, got shape {T.shape}")
    scale = max(1.0, float(np.abs(T).max()) if T.size else 0.0)
    if np.abs(T - T.conj().T).max() > tol * scale:
        raise ValueError("operator is not hermitian, so not positive")
    w, G = np.linalg.eigh((T + T.conj().T) / 2)
    if w.min() < -tol * scale:
        raise ValueError(f"operator is not positive (eigenvalue {w.min():.3e})")
    w = np.clip(w, 0.0, None)
    G = _normalize_phase(G)
    if np.all(T.imag == 0):
        G = G.real.astype(np.complex128)
    wkey = np.round(w / (1e-9 * scale))
    keys = [(-wkey[k],) + tuple(np.round(np.r_[G[:, k].real, G[:, k].imag], 12)) for k in range(len(w))]
    order = sorted(range(len(w)), key=lambda k: keys[k])
    return w[order], G[:, order]


@dataclass(eq=False)
class HSConstruction:
    T: np.ndarray
    xi: VectorMeasure
    eta: VectorMeasure
    achieved: float
    hs: float
    variant: str
    degenerate: bool = False
    spectrum: np.ndarray | None = None

    @property
    def error(self) -> float:
        return abs(self.achieved - self.hs)

    @property
    def passed(self) -> bool:
        return self.error <= 1e-8 * (1 + self.hs)

    def scaled(self, eps: float) -> "HSConstruction":
        """Both measures multiplied by ``eps``; the pairing scales by ``eps^2``."""
        return HSConstruction(
            self.T, self.xi.scaled(eps), self.eta.scaled(eps), eps * eps * self.achieved,
            self.hs, self.variant, self.degenerate, self.spectrum,
        )


def _positive_construction(T, variant):
    n = T.shape[0]
    t, G = spectral_decomposition(T)
    tnorm = float(np.linalg.norm(t))
    if variant == "complex-dft":
        U = dft_matrix(n)
    elif variant == "real-hadamard":
        U = hadamard_matrix(n)
    else:
        raise ValueError(f"unknown variant {variant!r}; choose from {VARIANTS}")
    rows = G.T  # row k is g_k
    # (g_k | e_j) = conj(U_jk), so |(e_j|g_k)| = 1/sqrt(n)
    E = U.conj() @ rows
    xi = VectorMeasure.from_vectors(E / math.sqrt(n), orthogonal=True)
    if tnorm == 0.0:
        eta = VectorMeasure.from_vectors(np.zeros((n, n)), orthogonal=True)
        return xi, eta, t, True
    eta = VectorMeasure.from_vectors((t / tnorm)[:, None] * rows, orthogonal=True)
    return xi, eta, t, False


def construct_hs_measures(T, variant: str = "complex-dft", polar: bool = False) -> HSConstruction:
    """Build orthogonal unit-norm ``xi, eta`` with ``sum_jk |(xi_j|T eta_k)| = ||T||_2``.

    ``T`` must be positive semidefinite unless ``polar=True``.  In that case
    any (even rectangular) ``T = U_r S V_r^*`` is accepted: the construction
    runs on ``diag(S)`` and the isometries ``U_r``, ``V_r`` carry the
    measures back, which is the reduction to a positive operator.
    ``T = 0`` gives ``achieved = 0`` with ``eta`` the zero measure.
    """
    T = np.asarray(T, dtype=np.complex128)
    if T.ndim != 2 or min(T.shape) < 1:
        raise ValueError(f"operator must be a nonempty matrix, got shape {T.shape}")
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}; choose from {VARIANTS}")
    hs = float(np.linalg.norm(T))
    if not polar:
        xi, eta, t, degenerate = _positive_construction(T, variant)
    else:
        U, s, Vh = np.linalg.svd(T)
        r = int(np.sum(s > 1e-13 * s[0])) if s[0] > 0 else 0
        if r == 0:
            m = T.shape[0]
            xi = VectorMeasure.from_vectors(np.eye(m) / math.sqrt(m), orthogonal=True)
            eta = VectorMeasure.from_vectors(np.zeros((1, T.shape[1])), orthogonal=True)
            return HSConstruction(T, xi, eta, 0.0, hs, variant, True, np.zeros(0))
        xi_c, eta_c, t, degenerate = _positive_construction(np.diag(s[:r]).astype(complex), variant)
        xi = VectorMeasure.from_vectors(xi_c.atom_vectors @ U[:, :r].T, orthogonal=True)
        eta = VectorMeasure.from_vectors(eta_c.atom_vectors @ Vh[:r].conj(), orthogonal=True)
    achieved = total_variation_product(xi, eta, T)
    return HSConstruction(T, xi, eta, achieved, hs, variant, degenerate, t)


# -- optimality --------------------------------------------------------------


@dataclass
class OptimalityReport:
    max_found: float
    constructed: float
    hs: float
    samples: int

    @property
    def passed(self) -> bool:
        return self.max_found <= self.hs + 1e-8


def _haar(rng, n):
    Q, R = np.linalg.qr(rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)))
    return Q * (np.diag(R) / np.abs(np.diag(R)))


def _best_weights_value(T, E, F):
    # sup over unit nonnegative weights a, b of sum_jk a_j |(e_j|T f_k)| b_k
    return float(np.linalg.norm(np.abs(E.conj().T @ T @ F), 2))


def optimality_check(T, samples: int = 500, seed: int = 0, refine_steps: int = 200,
                     polar: bool = False) -> OptimalityReport:
    """Random search for orthogonal unit measures beating ``||T||_2``.

    Bases ``{e_j}``, ``{f_k}`` are Haar samples; for fixed bases the best
    weights are the top singular pair of the matrix ``|(e_j|T f_k)|``, so
    only the bases are searched.  The best sample is then refined by small
    random unitary rotations.  ``polar`` allows any square ``T``.
    """
    T = np.asarray(T, dtype=np.complex128)
    n = T.shape[0]
    if T.ndim != 2 or T.shape[1] != n:
        raise ValueError(f"optimality search needs a square matrix, got shape {T.shape}")
    if n > OPTIMALITY_CAP:
        raise ValueError(f"optimality search is capped at n = {OPTIMALITY_CAP}")
    c = construct_hs_measures(T, polar=polar)
    rng = np.random.default_rng(seed)
    best, bestE, bestF = -1.0, None, None
    for _ in range(samples):
        E, F = _haar(rng, n), _haar(rng, n)
        v = _best_weights_value(T, E, F)
        if v > best:
            best, bestE, bestF = v, E, F
    step = 0.2
    for _ in range(refine_steps):
        A = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        B = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        E = bestE @ expm(step * (A - A.conj().T) / 2)
        F = bestF @ expm(step * (B - B.conj().T) / 2)
        v = _best_weights_value(T, E, F)
        if v > best:
            best, bestE, bestF = v, E, F
        else:
            step *= 0.98
    return OptimalityReport(max(best, 0.0), c.achieved, c.hs, samples)


# -- divergence for operators outside the Hilbert-Schmidt class -------------


def default_eps(n: int) -> float:
    """``eps_n = 1/(n+1)``; ``sum eps_n^2 = pi^2/6 - 1 < 1``."""
    return 1.0 / (n + 1)


def default_eps_tail_sq(N: int) -> float:
    """``sum_{n > N} eps_n^2`` for the default sequence."""
    return float(zeta(2, N + 2))


@dataclass(eq=False)
class DivergenceWitness:
    eps: list[float]
    blocks: list[HSConstruction]
    partial_sums: list[float]
    xi: TruncatedMeasure | None = None
    eta: TruncatedMeasure | None = None
    norm_sq_bound: float = 0.0
    block_dims: list[int] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        ok_blocks = all(b.achieved >= 1 - 1e-8 for b in self.blocks)
        ok_sums = all(s >= (i + 1) - 1e-8 for i, s in enumerate(self.partial_sums))
        return ok_blocks and ok_sums and self.norm_sq_bound < 1


def required_identity_dim(eps: float) -> int:
    """Smallest ``d`` with ``eps^2 * sqrt(d) >= 1``."""
    d = math.ceil(eps ** -4 * (1 - 1e-12))
    return max(d, 1)


def divergence_witness(N: int, eps=None, blocks=None, max_dim: int = MAX_BLOCK_DIM) -> DivergenceWitness:
    """Blocks ``T_n`` with ``||T_n||_2 >= 1/eps_n^2`` give ``||(xi_n|T eta_n)|| >= 1``.

    Measures built block by block have ``||xi_n|| = ||eta_n|| = eps_n`` on
    mutually orthogonal coordinates, so ``sum ||xi_n||^2 = sum eps_n^2``
    stays bounded while the paired variations add up to at least ``N``.
    Without ``blocks`` identity blocks of the minimal dimension are used.
    """
    if N < 0:
        raise ValueError("block count must be nonnegative")
    if eps is None:
        eps = [default_eps(n) for n in range(1, N + 1)]
        tail_sq = default_eps_tail_sq(N)
    else:
        eps = [float(e) for e in eps]
        if len(eps) < N:
            raise ValueError(f"need {N} values of eps, got {len(eps)}")
        eps = eps[:N]
        tail_sq = 0.0
    if any(not e > 0 for e in eps):
        raise ValueError("eps values must be positive")
    if blocks is None:
        dims = [required_identity_dim(e) for e in eps]
        too_big = [(i + 1, d) for i, d in enumerate(dims) if d > max_dim]
        if too_big:
            n, d = too_big[0]
            raise ValueError(
                f"block {n} needs an identity of dimension {d}, above the cap {max_dim}"
            )
        mats = [np.eye(d) for d in dims]
    else:
        mats = [np.asarray(b, dtype=np.complex128) for b in blocks[:N]]
        if len(mats) < N:
            raise ValueError(f"need {N} blocks, got {len(mats)}")
        for i, (e, M) in enumerate(zip(eps, mats)):
            if np.linalg.norm(M) < (1 - 1e-12) / (e * e):
                raise ValueError(
                    f"block {i + 1} has Hilbert-Schmidt norm {np.linalg.norm(M):.6g} < 1/eps^2 = "
                    f"{1 / e**2:.6g}; an identity block would need dimension {required_identity_dim(e)}"
                )
        dims = [M.shape[0] for M in mats]
    built = []
    sums = []
    total = 0.0
    for e, M in zip(eps, mats):
        c = construct_hs_measures(M).scaled(e)
        built.append(c)
        total += c.achieved
        sums.append(total)
    xi = TruncatedMeasure(tuple((c.xi, e) for c, e in zip(built, eps)), math.sqrt(tail_sq))
    eta = TruncatedMeasure(tuple((c.eta, e) for c, e in zip(built, eps)), math.sqrt(tail_sq))
    norm_sq = float(sum(e * e for e in eps)) + tail_sq
    return DivergenceWitness(eps, built, sums, xi, eta, norm_sq, dims)


# -- product spectral measure ------------------------------------------------


@dataclass
class SpectralDemoReport:
    times: list[float]
    direct: list[complex]
    product_sum: list[complex]
    discrepancies: list[float]
    total_variation: float
    eigenvalues: list[float]

    @property
    def max_discrepancy(self) -> float:
        return max(self.discrepancies) if self.discrepancies else 0.0

    def passed(self, tol: float = 1e-10) -> bool:
        return self.max_discrepancy <= tol


def spectral_projections(H, tol: float = 1e-9):
    """Distinct eigenvalues of hermitian ``H`` with their orthogonal projections."""
    w, V = np.linalg.eigh(H)
    scale = max(1.0, float(np.abs(w).max()))
    groups = []
    start = 0
    for k in range(1, len(w) + 1):
        if k == len(w) or w[k] - w[start] > tol * scale:
            Vg = V[:, start:k]
            groups.append((float(w[start:k].mean()), Vg @ Vg.conj().T))
            start = k
    return groups


def spectral_demo(H, T, xi, eta, times) -> SpectralDemoReport:
    """Compare ``(U(t)^* xi | T U(t)^* eta)`` with the product-measure sum.

    ``U(t) = exp(itH)``.  The right side is
    ``sum_jk exp(it(tau_j - tau_k)) (P_j xi | T P_k eta)`` over the spectral
    projections of ``H``.
    """
    H = np.asarray(H, dtype=np.complex128)
    T = np.asarray(T, dtype=np.complex128)
    xi = np.asarray(xi, dtype=np.complex128)
    eta = np.asarray(eta, dtype=np.complex128)
    n = H.shape[0]
    if H.shape != (n, n):
        raise ValueError("H must be square")
    if np.abs(H - H.conj().T).max() > 1e-10:
        raise ValueError("H is not hermitian")
    if T.shape != (n, n) or xi.shape != (n,) or eta.shape != (n,):
        raise ValueError("dimensions of T, xi, eta must match H")
    groups = spectral_projections(H)
    taus = np.array([g[0] for g in groups])
    Pxi = [P @ xi for _, P in groups]
    Peta = [P @ eta for _, P in groups]
    pair = np.array([[np.vdot(a, T @ b) for b in Peta] for a in Pxi])
    direct, prod, disc = [], [], []
    for t in times:
        U = expm(1j * t * H)
        a = complex(np.vdot(U.conj().T @ xi, T @ (U.conj().T @ eta)))
        b = complex(np.sum(np.exp(1j * t * (taus[:, None] - taus[None, :])) * pair))
        direct.append(a)
        prod.append(b)
        disc.append(abs(a - b))
    return SpectralDemoReport(
        [float(t) for t in times], direct, prod, disc, float(np.abs(pair).sum()), taus.tolist()
    )
