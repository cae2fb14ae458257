"""Half Average Inequality: some half-space captures a fixed share of the total length.

For nonzero ``v_1, ..., v_m`` in ``R^d`` there is ``J`` with
``|sum_{j in J} v_j| >= C_d sum_j |v_j|``, where
``C_d = int_{|e|=1} (e_1, e)_+ de`` for the normalized surface measure.
The subset is the positive set of a maximizer of
``g(e) = sum_j (v_j, e)_+``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .sweep import max_halfplane_sum


def cd_closed_form(d: int) -> float:
    """``Gamma(d/2) / (2 sqrt(pi) Gamma((d+1)/2))``: 1/2, 1/pi, 1/4 for d = 1, 2, 3."""
    if d < 1:
        raise ValueError("dimension must be positive")
    return math.exp(gammaln(d / 2) - gammaln((d + 1) / 2)) / (2 * math.sqrt(math.pi))


@dataclass(frozen=True, eq=False)
class VectorFamily:
    """Real vectors in ``R^d``; zero vectors are dropped, ``index`` maps back to the input order."""

    vectors: np.ndarray
    index: np.ndarray

    @classmethod
    def from_vectors(cls, vectors, d: int | None = None) -> "VectorFamily":
        arr = np.asarray(vectors, dtype=float)
        if arr.ndim == 1:
            arr = arr.reshape(-1, 1) if d in (None, 1) else arr.reshape(-1, d)
        if arr.ndim != 2 or (d is not None and arr.shape[1] != d):
            raise ValueError("vectors must form an (m, d) array")
        if arr.shape[1] < 1:
            raise ValueError("dimension must be positive")
        if not np.all(np.isfinite(arr)):
            raise ValueError("vectors must be finite")
        keep = np.flatnonzero(np.linalg.norm(arr, axis=1) > 0)
        return cls(arr[keep], keep)

    @property
    def d(self) -> int:
        return self.vectors.shape[1]

    def __len__(self) -> int:
        return self.vectors.shape[0]

    def g(self, e) -> float:
        return float(np.clip(self.vectors @ np.asarray(e, dtype=float), 0, None).sum())


@dataclass(frozen=True)
class HalfAverageConfig:
    restarts: int = 16
    max_iters: int = 200
    probes: int = 4096
    slack: float = 1e-9
    seed: int = 0


@dataclass
class HalfAverageResult:
    J: tuple[int, ...]
    ratio: float
    e0: np.ndarray
    g_value: float
    constant: float

    @property
    def passed(self) -> bool:
        return self.ratio >= self.constant


def _positive_set(V, e):
    return np.flatnonzero(V @ e > 0)


def _ascent(V, e, max_iters):
    J = _positive_set(V, e)
    for _ in range(max_iters):
        w = V[J].sum(axis=0) if len(J) else np.zeros(V.shape[1])
        nw = np.linalg.norm(w)
        if nw == 0.0:
            break
        e = w / nw
        J_new = _positive_set(V, e)
        if np.array_equal(J_new, J):
            break
        J = J_new
    return e


def half_average_subset(fam: VectorFamily, cfg: HalfAverageConfig | None = None) -> HalfAverageResult:
    """Positive set ``J`` of a maximizer of ``g`` and its ratio ``|sum_J v| / sum |v|``.

    d = 1 checks both directions; d = 2 is exact by an angular sweep; for
    d >= 3 the fixed point ``e <- normalize(sum_{(v,e)>0} v)`` is run from
    every vector direction, seeded random starts and the best of a batch of
    random probe directions.
    """
    cfg = cfg or HalfAverageConfig()
    if len(fam) == 0:
        raise ValueError("the family has no nonzero vectors")
    V = fam.vectors
    d = fam.d
    if d == 1:
        cands = [np.array([1.0]), np.array([-1.0])]
    elif d == 2:
        _, e0, _ = max_halfplane_sum(V)
        cands = [e0]
    else:
        rng = np.random.default_rng(cfg.seed)
        starts = V / np.linalg.norm(V, axis=1)[:, None]
        G = rng.standard_normal((cfg.restarts, d))
        # the best of many cheap probes seed further ascents
        P = rng.standard_normal((cfg.probes, d))
        P /= np.linalg.norm(P, axis=1)[:, None]
        top = np.argsort(-np.clip(P @ V.T, 0, None).sum(axis=1))[: cfg.restarts]
        starts = np.vstack([starts, G / np.linalg.norm(G, axis=1)[:, None], P[top]])
        cands = [_ascent(V, s, cfg.max_iters) for s in starts]
    e0 = max(cands, key=fam.g)
    J = _positive_set(V, e0)
    total = float(np.linalg.norm(V, axis=1).sum())
    ratio = float(np.linalg.norm(V[J].sum(axis=0))) / total
    c = cd_closed_form(d)
    if ratio < c - cfg.slack:
        raise AssertionError(f"ratio {ratio} below C_{d} = {c}")
    return HalfAverageResult(tuple(int(i) for i in fam.index[J]), ratio, e0, fam.g(e0), c)


@dataclass
class CdEstimate:
    d: int
    estimate: float
    stderr: float
    closed_form: float

    @property
    def z_score(self) -> float:
        if self.stderr == 0:
            return 0.0 if self.estimate == self.closed_form else math.inf
        return (self.estimate - self.closed_form) / self.stderr


def estimate_cd(d: int, samples: int = 1_000_000, seed: int = 0, chunk: int = 262144) -> CdEstimate:
    """Monte Carlo mean of ``(e_1, e)_+`` over uniform unit ``e`` in ``R^d``."""
    if d < 2:
        raise ValueError("estimate_cd needs d >= 2")
    if samples < 2:
        raise ValueError("need at least two samples")
    rng = np.random.default_rng(seed)
    s = s2 = 0.0
    done = 0
    while done < samples:
        m = min(chunk, samples - done)
        G = rng.standard_normal((m, d))
        x = np.clip(G[:, 0] / np.linalg.norm(G, axis=1), 0, None)
        s += float(x.sum())
        s2 += float((x * x).sum())
        done += m
    mean = s / samples
    var = max(s2 / samples - mean * mean, 0.0) * samples / (samples - 1)
    return CdEstimate(d, mean, math.sqrt(var / samples), cd_closed_form(d))


def ascent_check(fam: VectorFamily, e0, samples: int = 2000, seed: int = 0) -> float:
    """``g(e0) - max g(e)`` over random unit ``e``; nonnegative when ``e0`` beats every sample."""
    rng = np.random.default_rng(seed)
    E = rng.standard_normal((samples, fam.d))
    E /= np.linalg.norm(E, axis=1)[:, None]
    vals = np.clip(E @ fam.vectors.T, 0, None).sum(axis=1)
    return fam.g(e0) - float(vals.max())
