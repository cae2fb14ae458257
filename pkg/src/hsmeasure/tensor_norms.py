"""Cross norms on C^m (x) C^n and p-summing norms of matrices.

A tensor ``z = sum_jk z[j, k] e_j (x) f_k`` is stored by its coefficient
matrix; ``x (x) y`` has coefficients ``outer(x, y)``.  In the Hilbert case
the least cross norm is the operator norm and the largest one is the trace
norm, so everything exact reduces to singular values.  Jacobs' norms
``l``, ``r``, ``m`` and the p-summing norms are only bracketed.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .vector_measures import DEFAULT_CONFIG, OptConfig, VectorMeasure, semivariation

RANK_TOL = 1e-13


@dataclass(frozen=True, eq=False)
class TensorElement:
    coeffs: np.ndarray

    def __post_init__(self):
        z = np.asarray(self.coeffs, dtype=np.complex128)
        if z.ndim != 2 or min(z.shape) < 1:
            raise ValueError(f"coefficients must be a nonempty matrix, got shape {z.shape}")
        z.setflags(write=False)
        object.__setattr__(self, "coeffs", z)

    @property
    def m(self) -> int:
        return self.coeffs.shape[0]

    @property
    def n(self) -> int:
        return self.coeffs.shape[1]

    @classmethod
    def elementary(cls, x, y) -> "TensorElement":
        return cls(np.outer(np.asarray(x, dtype=complex), np.asarray(y, dtype=complex)))

    @classmethod
    def from_pairs(cls, pairs) -> "TensorElement":
        return cls(Representation(list(pairs)).tensor())

    def transpose(self) -> "TensorElement":
        return TensorElement(self.coeffs.T)


@dataclass
class Representation:
    """``z = sum_l x_l (x) y_l``."""

    pairs: list[tuple[np.ndarray, np.ndarray]]

    @classmethod
    def from_factors(cls, X, Yt) -> "Representation":
        """Columns of ``X`` paired with rows of ``Yt`` (so ``z = X @ Yt``)."""
        return cls([(X[:, i].copy(), Yt[i, :].copy()) for i in range(X.shape[1])])

    def tensor(self) -> np.ndarray:
        if not self.pairs:
            raise ValueError("empty representation")
        return sum(np.outer(x, y) for x, y in self.pairs)

    def reproduces(self, z: TensorElement, tol: float = 1e-10) -> bool:
        return bool(np.abs(self.tensor() - z.coeffs).max() <= tol * max(1.0, np.abs(z.coeffs).max()))

    def projective_cost(self) -> float:
        return float(sum(np.linalg.norm(x) * np.linalg.norm(y) for x, y in self.pairs))

    def l_atoms(self) -> np.ndarray:
        """The vectors ``||y_l|| x_l`` whose semi-variation is the l-cost."""
        return np.array([np.linalg.norm(y) * x for x, y in self.pairs])


def singular_values(z) -> np.ndarray:
    z = z.coeffs if isinstance(z, TensorElement) else np.asarray(z, dtype=complex)
    return np.linalg.svd(z, compute_uv=False)


def injective_norm(z: TensorElement) -> float:
    return float(singular_values(z)[0])


def projective_norm(z: TensorElement) -> float:
    return float(singular_values(z).sum())


def hs_norm(T) -> float:
    """Hilbert-Schmidt norm ``sqrt(sum |T_jk|^2)``."""
    T = np.asarray(T, dtype=complex)
    return float(np.sqrt(np.sum(np.abs(T) ** 2)))


def projective_upper_by_jacobi(z: TensorElement, max_sweeps: int = 60, tol: float = 1e-15):
    """Search representations with one-sided Jacobi rotations.

    Rotating column pairs of ``Z V`` until they are orthogonal keeps
    ``z = (Z V)(V^H)`` exact at every step, with unit second factors, so
    the cost ``sum_l ||(Z V)_l||`` is an explicit upper bound for the
    projective norm; it decreases to the trace norm.  No SVD routine is
    used, which makes this an independent check of ``projective_norm``.
    """
    A = np.array(z.coeffs, dtype=complex)
    n = A.shape[1]
    V = np.eye(n, dtype=complex)
    for _ in range(max_sweeps):
        off = 0.0
        for p in range(n - 1):
            for q in range(p + 1, n):
                alpha = np.vdot(A[:, p], A[:, p]).real
                beta = np.vdot(A[:, q], A[:, q]).real
                gamma = np.vdot(A[:, p], A[:, q])
                g = abs(gamma)
                if alpha * beta == 0.0 or g <= tol * math.sqrt(alpha * beta):
                    continue
                off = max(off, g / math.sqrt(alpha * beta))
                zeta = (beta - alpha) / (2 * g)
                if abs(zeta) > 1e100:
                    t = 0.5 / zeta
                else:
                    t = math.copysign(1.0, zeta) / (abs(zeta) + math.sqrt(1 + zeta * zeta))
                c = 1 / math.sqrt(1 + t * t)
                s = c * t
                ph = gamma / g
                rot = np.array([[c, s * ph], [-s * np.conj(ph), c]])
                A[:, [p, q]] = A[:, [p, q]] @ rot
                V[:, [p, q]] = V[:, [p, q]] @ rot
        if off <= tol:
            break
    rep = Representation.from_factors(A, V.conj().T)
    return rep.projective_cost(), rep


# -- Jacobs' norms -----------------------------------------------------------


@dataclass
class NormBounds:
    lower: float
    upper: float
    representation: Representation | None = None
    converged: bool = True
    evaluated: int = 0

    def __iter__(self):
        yield self.lower
        yield self.upper


def _dft(k):
    idx = np.arange(k)
    return np.exp(2j * np.pi * np.outer(idx, idx) / k) / math.sqrt(k)


def _rep_from_mixing(Us, Vh, W):
    X = Us @ W
    Yt = np.linalg.pinv(W) @ Vh
    return X, Yt


def _l_cost(X, Yt, cfg):
    atoms = np.linalg.norm(Yt, axis=1)[:, None] * X.T
    res = semivariation(VectorMeasure.from_vectors(atoms), cfg=cfg, field="complex", method="iterate")
    return res


def l_norm_bounds(z: TensorElement, cfg: OptConfig | None = None, search_steps: int = 40) -> NormBounds:
    """Bracket ``||z||_l = inf_rep sup_{|a_i| <= 1} ||sum a_i ||y_i|| x_i||``.

    ``lower`` is the injective norm, which every cross norm majorizes.
    ``upper`` is the smallest certified inner sup over the representations
    searched: the SVD factors (whose inner sup is exactly the
    Hilbert-Schmidt norm, the atoms being orthogonal), tight DFT frames of
    every length up to ``min(m, n) + 2``, and a seeded random local search
    over mixing matrices of length ``rank``.
    """
    cfg = cfg or DEFAULT_CONFIG
    Z = z.coeffs
    U, s, Vh = np.linalg.svd(Z)
    lower = float(s[0]) if len(s) else 0.0
    if lower == 0.0:
        return NormBounds(0.0, 0.0, None, True, 0)
    r = int(np.sum(s > RANK_TOL * s[0]))
    Us = U[:, :r] * s[:r]
    Vh = Vh[:r]
    svd_rep = Representation.from_factors(Us, Vh)
    upper = float(np.linalg.norm(s[:r]))
    best_rep = svd_rep
    if r == 1:
        return NormBounds(lower, max(upper, lower), best_rep, True, 1)

    quick = OptConfig(restarts=4, max_iters=100, tol=1e-9, seed=cfg.seed)
    candidates = []
    for k in range(r, min(z.m, z.n) + 3):
        W = _dft(k)[:r]
        X, Yt = _rep_from_mixing(Us, Vh, W)
        candidates.append((_l_cost(X, Yt, quick).value, X, Yt))

    rng = np.random.default_rng(cfg.seed)
    W = np.eye(r, dtype=complex)
    cur = upper
    step = 0.3
    for _ in range(search_steps):
        trial = W + step * (rng.standard_normal((r, r)) + 1j * rng.standard_normal((r, r)))
        if np.linalg.cond(trial) > 1e8:
            continue
        X, Yt = _rep_from_mixing(Us, Vh, trial)
        val = _l_cost(X, Yt, quick).value
        if val < cur:
            W, cur = trial, val
            candidates.append((val, X, Yt))
        else:
            step *= 0.9

    converged = True
    evaluated = 1
    candidates.sort(key=lambda c: c[0])
    for _, X, Yt in candidates[:3]:
        res = _l_cost(X, Yt, cfg)
        evaluated += 1
        converged = converged and res.converged
        if res.upper < upper:
            upper = res.upper
            best_rep = Representation.from_factors(X, Yt)
    return NormBounds(lower, max(upper, lower), best_rep, converged, evaluated)


def r_norm_bounds(z: TensorElement, cfg: OptConfig | None = None, search_steps: int = 40) -> NormBounds:
    """``||z||_r`` is ``||.||_l`` with the factors swapped."""
    b = l_norm_bounds(z.transpose(), cfg, search_steps)
    rep = None
    if b.representation is not None:
        rep = Representation([(y, x) for x, y in b.representation.pairs])
    return NormBounds(b.lower, b.upper, rep, b.converged, b.evaluated)


def m_norm_bounds(z: TensorElement, cfg: OptConfig | None = None, search_steps: int = 40,
                  l_bounds: NormBounds | None = None, r_bounds: NormBounds | None = None) -> NormBounds:
    """Arithmetic mean of the l and r brackets."""
    lb = l_bounds or l_norm_bounds(z, cfg, search_steps)
    rb = r_bounds or r_norm_bounds(z, cfg, search_steps)
    return NormBounds(
        (lb.lower + rb.lower) / 2, (lb.upper + rb.upper) / 2, None,
        lb.converged and rb.converged, lb.evaluated + rb.evaluated,
    )


@dataclass
class CrossNormReport:
    injective: float
    projective: float
    hilbert_schmidt: float
    l: NormBounds
    r: NormBounds
    m: NormBounds


def cross_norms(z: TensorElement, cfg: OptConfig | None = None, search_steps: int = 40) -> CrossNormReport:
    lb = l_norm_bounds(z, cfg, search_steps)
    rb = r_norm_bounds(z, cfg, search_steps)
    return CrossNormReport(
        injective_norm(z), projective_norm(z), hs_norm(z.coeffs),
        lb, rb, m_norm_bounds(z, l_bounds=lb, r_bounds=rb),
    )


# -- p-summing norms ---------------------------------------------------------


@dataclass(frozen=True)
class FamilyConfig:
    """Which finite families feed the p-summing lower bound."""

    random_families: int = 16
    max_family_size: int | None = None
    orthonormal: bool = True
    singular: bool = True
    repeated: bool = True
    seed: int = 0


def _haar_unitary(rng, n):
    Q, R = np.linalg.qr(rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)))
    return Q * (np.diag(R) / np.abs(np.diag(R)))


def sample_families(T, cfg: FamilyConfig | None = None) -> list[np.ndarray]:
    """Families as arrays whose rows are the vectors ``v_j`` of the domain."""
    cfg = cfg or FamilyConfig()
    T = np.asarray(T, dtype=complex)
    n = T.shape[1]
    rng = np.random.default_rng(cfg.seed)
    max_size = cfg.max_family_size or 2 * n
    fams = []
    if cfg.singular:
        _, _, Vh = np.linalg.svd(T)
        right = Vh.conj()  # rows are right singular vectors
        for k in range(1, n + 1):
            fams.append(right[:k])
    if cfg.orthonormal:
        fams.append(np.eye(n, dtype=complex))
        Q = _haar_unitary(rng, n).T
        for k in range(1, n + 1):
            fams.append(Q[:k])
    if cfg.repeated:
        _, _, Vh = np.linalg.svd(T)
        top = Vh[0].conj()
        for k in (2, max_size):
            fams.append(np.tile(top, (k, 1)))
    for _ in range(cfg.random_families):
        k = int(rng.integers(1, max_size + 1))
        fams.append(rng.standard_normal((k, n)) + 1j * rng.standard_normal((k, n)))
    return fams


def weak_p_norm_upper(V, p: float) -> float:
    """Upper bound on ``sup_{||v|| <= 1} (sum_j |<v, v_j>|^p)^(1/p)``.

    Exact for p = 2, for orthonormal families and for repeated vectors.
    """
    V = np.atleast_2d(np.asarray(V, dtype=complex))
    k = V.shape[0]
    op = float(np.linalg.norm(V, 2))
    if p == 2:
        return op
    row = np.linalg.norm(V, axis=1)
    if p > 2:
        return min(op, op ** (2 / p) * float(row.max()) ** (1 - 2 / p))
    return min(k ** (1 / p - 0.5) * op, float(np.sum(row**p)) ** (1 / p))


def family_ratio(T, V, p: float) -> float:
    """Certified lower bound for the p-summing norm from one family."""
    T = np.asarray(T, dtype=complex)
    V = np.atleast_2d(np.asarray(V, dtype=complex))
    num = float(np.sum(np.linalg.norm(V @ T.T, axis=1) ** p)) ** (1 / p)
    den = weak_p_norm_upper(V, p)
    if den == 0.0:
        return 0.0
    return num / den


@dataclass
class PSummingResult:
    p: float
    value: float
    best_family: int
    n_families: int
    hilbert_schmidt: float


def p_summing_lower_bound(T, p: float, families=None) -> PSummingResult:
    """Largest certified ratio over the families.

    ``families`` is a :class:`FamilyConfig`, an explicit list of arrays
    (rows are vectors), or None for the default configuration.  For p = 2
    the value never exceeds the Hilbert-Schmidt norm, which is the true
    2-summing norm.
    """
    if not p >= 1:
        raise ValueError("p must be at least 1")
    T = np.asarray(T, dtype=complex)
    if families is None or isinstance(families, FamilyConfig):
        families = sample_families(T, families)
    ratios = [family_ratio(T, V, p) for V in families]
    best = int(np.argmax(ratios)) if ratios else -1
    value = ratios[best] if ratios else 0.0
    hs = hs_norm(T)
    if p == 2:
        assert value <= hs * (1 + 1e-8) + 1e-12, (value, hs)
    return PSummingResult(p, value, best, len(families), hs)


@dataclass
class PSummingProfile:
    ps: list[float]
    raw: list[float]
    bounds: list[float]
    witnesses: list[tuple[int, float]]  # (family index, exponent it was certified at)


def p_summing_profile(T, ps, families=None) -> PSummingProfile:
    """Lower bounds on a grid of exponents, made non-increasing in p.

    A family certifying ``c`` at exponent q also certifies ``c`` at any
    p <= q once reweighted by ``||T v_j||^(q/r)`` with ``1/p = 1/q + 1/r``
    (the Hoelder step comparing summing norms), so the bound at p is the
    max of the raw bounds at all q >= p on the grid.  ``witnesses`` names
    the family and exponent behind each bound; see :func:`reweighted_ratio`.
    """
    T = np.asarray(T, dtype=complex)
    ps = sorted(float(p) for p in ps)
    if families is None or isinstance(families, FamilyConfig):
        families = sample_families(T, families)
    results = [p_summing_lower_bound(T, p, families) for p in ps]
    raw = [r.value for r in results]
    env = list(raw)
    wit = [(r.best_family, p) for r, p in zip(results, ps)]
    for i in range(len(ps) - 2, -1, -1):
        if env[i + 1] > env[i]:
            env[i] = env[i + 1]
            wit[i] = wit[i + 1]
    return PSummingProfile(ps, raw, env, wit)


def reweighted_family(T, V, p: float, q: float) -> np.ndarray:
    """The family ``lambda_j v_j`` that carries a q-ratio down to exponent p <= q."""
    if not 1 <= p <= q:
        raise ValueError("need 1 <= p <= q")
    T = np.asarray(T, dtype=complex)
    V = np.atleast_2d(np.asarray(V, dtype=complex))
    if p == q:
        return V.copy()
    r = 1 / (1 / p - 1 / q)
    lam = np.linalg.norm(V @ T.T, axis=1) ** (q / r)
    return lam[:, None] * V


def reweighted_ratio(T, V, p: float, q: float) -> float:
    """Certified p-summing lower bound from family ``V`` reweighted off exponent ``q``.

    The weak p-norm of ``lambda_j v_j`` is bounded by Hoelder as
    ``w_q(V) ||lambda||_r``, using the same upper bound for ``w_q`` as
    :func:`family_ratio`, so the result equals that q-ratio up to rounding.
    """
    if p == q:
        return family_ratio(T, V, p)
    T = np.asarray(T, dtype=complex)
    V = np.atleast_2d(np.asarray(V, dtype=complex))
    W = reweighted_family(T, V, p, q)
    r = 1 / (1 / p - 1 / q)
    lam = np.linalg.norm(V @ T.T, axis=1) ** (q / r)
    den = weak_p_norm_upper(V, q) * float(np.sum(lam**r)) ** (1 / r)
    if den == 0.0:
        return 0.0
    num = float(np.sum(np.linalg.norm(W @ T.T, axis=1) ** p)) ** (1 / p)
    return num / den


def verify_profile(T, profile: PSummingProfile, families) -> float:
    """Largest relative shortfall of the recomputed certificates (0 when all hold)."""
    worst = 0.0
    for p, bound, (j, q) in zip(profile.ps, profile.bounds, profile.witnesses):
        cert = reweighted_ratio(T, families[j], p, q)
        if bound > 0:
            worst = max(worst, (bound - cert) / bound)
    return worst


# -- l^1 -> l^2 is 1-summing ---------------------------------------------------

KHINTCHINE_L1_CONSTANT = 12 * math.sqrt(math.pi)


@dataclass
class SummingCheckReport:
    constant: float
    max_ratio: float
    ratios: list[float] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.max_ratio <= self.constant


def weak_l1_norm(X) -> float:
    """``sup_{||x*||_inf <= 1} sum_j |x*(x_j)|`` for real rows ``x_j``, by sign enumeration."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    value, _ = kernels.max_sign_l1(np.ascontiguousarray(X))
    return value


def khintchine_summing_check(dims: int = 8, family_size: int = 6, samples: int = 200,
                             seed: int = 0, families=None) -> SummingCheckReport:
    """``sum_j ||x_j||_2 <= C * ||(x_j)||_{1,w}`` on families in truncated l^1."""
    if dims > 24:
        raise ValueError("sign enumeration capped at 24 coordinates")
    rng = np.random.default_rng(seed)
    if families is None:
        families = []
        for i in range(samples):
            kind = i % 3
            if kind == 0:
                X = rng.standard_normal((family_size, dims))
            elif kind == 1:
                X = rng.standard_normal((family_size, dims)) * (rng.random((family_size, dims)) < 0.3)
            else:
                X = rng.standard_cauchy((family_size, dims))
            families.append(X)
    ratios = []
    for X in families:
        X = np.atleast_2d(np.asarray(X, dtype=float))
        den = weak_l1_norm(X)
        if den == 0.0:
            continue
        ratios.append(float(np.linalg.norm(X, axis=1).sum()) / den)
    return SummingCheckReport(KHINTCHINE_L1_CONSTANT, max(ratios) if ratios else 0.0, ratios)
