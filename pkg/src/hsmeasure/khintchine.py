"""Rademacher sums: exact and sampled moments, Khintchine constants, tails.

``s_n`` are independent fair signs.  Moments of ``sum a_n s_n`` are
computed exactly by enumerating all ``2^n`` sign patterns (``n <= 24``)
or estimated by Monte Carlo.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from . import kernels

ENUM_CAP = 24
RADEMACHER_CAP = 62


def rademacher(k: int, t: float) -> int:
    """``r_k(t) = r_1(2^(k-1) t)`` with ``r_1 = +1`` on ``[0, 1/2)`` and ``-1`` on ``[1/2, 1)``."""
    if not 1 <= k <= RADEMACHER_CAP:
        raise ValueError(f"k must lie in [1, {RADEMACHER_CAP}]")
    frac = math.ldexp(float(t), k - 1) % 1.0
    return 1 if frac < 0.5 else -1


def rademacher_patterns(n: int) -> np.ndarray:
    """Row ``i`` holds ``(r_1(t), ..., r_n(t))`` at the midpoint of the i-th dyadic interval of length ``2^-n``."""
    if not 1 <= n <= 24:
        raise ValueError("n must lie in [1, 24]")
    i = np.arange(1 << n)[:, None]
    k = np.arange(1, n + 1)[None, :]
    # digit k of the binary expansion of (i + 1/2) / 2^n
    bit = (i >> (n - k)) & 1
    return (1 - 2 * bit).astype(np.int8)


@dataclass(frozen=True, eq=False)
class SignSum:
    coeffs: np.ndarray

    def __post_init__(self):
        a = np.atleast_1d(np.asarray(self.coeffs, dtype=np.complex128)).ravel()
        if a.size < 1:
            raise ValueError("a sign sum needs at least one coefficient")
        a.setflags(write=False)
        object.__setattr__(self, "coeffs", a)

    @property
    def n(self) -> int:
        return self.coeffs.size

    @property
    def is_real(self) -> bool:
        return bool(np.all(self.coeffs.imag == 0))

    @property
    def norm2(self) -> float:
        return float(np.linalg.norm(self.coeffs))


def _as_signsum(a) -> SignSum:
    return a if isinstance(a, SignSum) else SignSum(a)


def exact_moment(a, p: float) -> float:
    """``(2^-n sum_eps |sum_k eps_k a_k|^p)^(1/p)``."""
    a = _as_signsum(a)
    if not p >= 1:
        raise ValueError("p must be at least 1")
    if a.n > ENUM_CAP:
        raise ValueError(f"exact enumeration is capped at n = {ENUM_CAP}; use mc_moment")
    scale = float(np.abs(a.coeffs).max())
    if scale == 0.0:
        return 0.0
    # normalized so |sum|^p neither underflows nor overflows
    c = a.coeffs / scale
    m = kernels.sign_moment(np.ascontiguousarray(c.real), np.ascontiguousarray(c.imag), float(p))
    return scale * float(m) ** (1.0 / p)


def mc_moment(a, p: float, samples: int = 100_000, seed: int = 0, chunk: int = 65536):
    """Monte Carlo estimate of ``E|sum a_k s_k|^p`` (no root) with its standard error."""
    a = _as_signsum(a)
    if samples < 1:
        raise ValueError("samples must be positive")
    rng = np.random.default_rng(seed)
    total = 0.0
    total_sq = 0.0
    done = 0
    while done < samples:
        m = min(chunk, samples - done)
        eps = rng.integers(0, 2, size=(m, a.n), dtype=np.int8) * 2 - 1
        vals = np.abs(eps @ a.coeffs) ** p
        total += float(vals.sum())
        total_sq += float((vals * vals).sum())
        done += m
    mean = total / samples
    if samples == 1:
        return mean, 0.0
    var = max(total_sq / samples - mean * mean, 0.0) * samples / (samples - 1)
    return mean, math.sqrt(var / samples)


def upper_constant(p: float) -> float:
    """``2 p^(1/p) Gamma(p/2)^(1/p)``, valid for complex coefficients when ``p >= 2``."""
    return 2.0 * math.exp((math.log(p) + gammaln(p / 2)) / p)


def real_upper_constant(p: float) -> float:
    """``sqrt(2) p^(1/p) Gamma(p/2)^(1/p)``, the bound before the complex split."""
    return upper_constant(p) / math.sqrt(2)


def lower_constant(p: float) -> float:
    """``C_(4-p)^(4/p - 1)`` for ``1 <= p < 2``; equals ``12 sqrt(pi)`` at p = 1."""
    if not 1 <= p < 2:
        raise ValueError("lower constant needs 1 <= p < 2")
    return upper_constant(4 - p) ** (4 / p - 1)


L1_CONSTANT = 12 * math.sqrt(math.pi)


@dataclass
class ConstantCheck:
    p: float
    moment: float
    norm2: float
    ratio: float
    bound: float
    passed: bool
    extra: dict | None = None


def check_upper_constant(a, p: float) -> ConstantCheck:
    """``||sum a_k s_k||_p <= C_p ||a||_2`` for ``p > 2``; ratio is the left side over ``||a||_2``."""
    a = _as_signsum(a)
    if not p > 2:
        raise ValueError("upper constant check needs p > 2")
    mom = exact_moment(a, p)
    nrm = a.norm2
    bound = upper_constant(p)
    ratio = mom / nrm if nrm > 0 else 0.0
    extra = {"real_bound": real_upper_constant(p)} if a.is_real else None
    passed = mom <= bound * nrm + 1e-12
    if a.is_real:
        passed = passed and mom <= real_upper_constant(p) * nrm + 1e-12
    return ConstantCheck(p, mom, nrm, ratio, bound, passed, extra)


def check_lower_constant(a, p: float) -> ConstantCheck:
    """``||a||_2 <= C ||sum a_k s_k||_p`` for ``1 <= p < 2``; ratio is ``||a||_2`` over the moment."""
    a = _as_signsum(a)
    mom = exact_moment(a, p)
    nrm = a.norm2
    bound = lower_constant(p)
    ratio = nrm / mom if mom > 0 else (0.0 if nrm == 0 else math.inf)
    passed = nrm <= bound * mom + 1e-12
    extra = None
    if p == 1:
        extra = {"l1_constant": L1_CONSTANT}
        passed = passed and nrm <= L1_CONSTANT * mom + 1e-12
    return ConstantCheck(p, mom, nrm, ratio, bound, passed, extra)


@dataclass
class TailReport:
    t: list[float]
    tail: list[float]
    bound: list[float]

    @property
    def passed(self) -> bool:
        return all(x <= b for x, b in zip(self.tail, self.bound))

    @property
    def worst_slack(self) -> float:
        return min((b - x for x, b in zip(self.tail, self.bound)), default=math.inf)


def tail_probabilities(a, t_grid) -> np.ndarray:
    """Exact ``P(|sum a_k s_k| > t)`` for real coefficients."""
    a = _as_signsum(a)
    if not a.is_real:
        raise ValueError("tail bound is stated for real coefficients")
    if a.n > ENUM_CAP:
        raise ValueError(f"exact enumeration is capped at n = {ENUM_CAP}")
    t = np.asarray(t_grid, dtype=float)
    order = np.argsort(t, kind="stable")
    counts = kernels.sign_tail_counts(np.ascontiguousarray(a.coeffs.real), np.ascontiguousarray(t[order]))
    out = np.empty(len(t))
    out[order] = np.asarray(counts, dtype=float) / float(1 << a.n)
    return out


def tail_bound_check(a, t_grid) -> TailReport:
    """Compare exact tails with ``2 exp(-t^2 / (2 (a|a)))``."""
    a = _as_signsum(a)
    tail = tail_probabilities(a, t_grid)
    aa = a.norm2**2
    t = np.asarray(t_grid, dtype=float)
    bound = 2 * np.exp(-(t**2) / (2 * aa))
    return TailReport(t.tolist(), tail.tolist(), bound.tolist())


@dataclass
class ElementaryReport:
    x: list[float]
    margin: list[float]  # x^2/2 - log cosh x

    @property
    def passed(self) -> bool:
        return all(m >= -1e-15 for m in self.margin)


def elementary_inequality_check(x_grid) -> ElementaryReport:
    """``e^x + e^-x <= 2 e^(x^2/2)``, compared in logarithms so large x do not overflow."""
    x = np.abs(np.asarray(x_grid, dtype=float))
    log_cosh = x + np.log1p(np.exp(-2 * x)) - math.log(2)
    return ElementaryReport(np.asarray(x_grid, dtype=float).tolist(), (x * x / 2 - log_cosh).tolist())


def standard_corpus(size: int = 50, seed: int = 0, max_n: int = 16) -> list[np.ndarray]:
    """A fixed mix of coefficient sequences: flat, dominated, real and complex Gaussian."""
    rng = np.random.default_rng(seed)
    out = [np.ones(1), np.ones(2), np.ones(4), np.ones(8), np.array([10.0, 0.1, 0.1, 0.1])]
    while len(out) < size:
        n = int(rng.integers(1, max_n + 1))
        kind = len(out) % 3
        if kind == 0:
            out.append(rng.standard_normal(n))
        elif kind == 1:
            out.append(rng.standard_normal(n) + 1j * rng.standard_normal(n))
        else:
            out.append(rng.exponential(size=n) * rng.choice([-1.0, 1.0], size=n))
    return out[:size]


@dataclass
class TableRow:
    p: float
    kind: str  # "upper", "lower" or "exact"
    bound: float
    max_ratio: float
    cases: int
    passed: bool


def table(ps, corpus=None) -> list[TableRow]:
    """Worst empirical ratio against the constant for each p over a corpus."""
    corpus = standard_corpus() if corpus is None else corpus
    rows = []
    for p in ps:
        p = float(p)
        if p > 2:
            checks = [check_upper_constant(a, p) for a in corpus]
            kind, bound = "upper", upper_constant(p)
        elif p < 2:
            checks = [check_lower_constant(a, p) for a in corpus]
            kind, bound = "lower", lower_constant(p)
        else:
            ratios = [exact_moment(a, 2) / float(np.linalg.norm(a)) for a in corpus]
            rows.append(TableRow(p, "exact", 1.0, max(ratios),
                                 len(corpus), all(abs(r - 1) <= 1e-12 for r in ratios)))
            continue
        rows.append(TableRow(p, kind, bound, max(c.ratio for c in checks),
                             len(checks), all(c.passed for c in checks)))
    return rows
