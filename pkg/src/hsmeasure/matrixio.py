"""Plain-text matrices and vectors.

File format: UTF-8, one row per line, entries separated by whitespace,
``#`` starts a comment, blank lines are skipped.  Entries are real
(``3``, ``-1.5e-2``) or complex written ``re+imj`` (``1+2j``, ``-0.5j``).

Shorthands accepted wherever a matrix is expected:

``diag:a,b,...``      diagonal matrix
``eye:n``             identity
``rand:n[:seed]``     random positive semidefinite ``n x n`` (Gram of a complex Gaussian)
``randh:n[:seed]``    random hermitian
``randg:m,n[:seed]``  random complex Gaussian ``m x n``
"""
from __future__ import annotations

import os

import numpy as np


class InputError(ValueError):
    """Malformed or inconsistent numeric input."""


def parse_scalar(token: str) -> complex:
    tok = token.strip().replace("i", "j") if token.strip().endswith("i") else token.strip()
    try:
        return complex(tok)
    except ValueError:
        raise InputError(f"cannot parse number {token!r}") from None


def _maybe_real(arr: np.ndarray) -> np.ndarray:
    if np.all(arr.imag == 0):
        return arr.real.copy()
    return arr


def parse_matrix_text(text: str) -> np.ndarray:
    rows = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            rows.append([parse_scalar(tok) for tok in line.split()])
        except InputError as exc:
            raise InputError(f"line {lineno}: {exc}") from None
    if not rows:
        raise InputError("no matrix entries found")
    width = len(rows[0])
    for i, r in enumerate(rows):
        if len(r) != width:
            raise InputError(f"row {i + 1} has {len(r)} entries, expected {width}")
    return _maybe_real(np.array(rows, dtype=np.complex128))


def format_matrix(M) -> str:
    M = np.atleast_2d(np.asarray(M))
    lines = []
    for row in M:
        lines.append(" ".join(_fmt(x) for x in row))
    return "\n".join(lines) + "\n"


def _fmt(x) -> str:
    x = complex(x)
    if x.imag == 0:
        return repr(x.real)
    return f"{x.real!r}{x.imag:+}j"


def _seed_part(parts, default_seed):
    if len(parts) > 1:
        try:
            return int(parts[1])
        except ValueError:
            raise InputError(f"bad seed {parts[1]!r}") from None
    return default_seed


def _positive_int(tok, what="size"):
    try:
        n = int(tok)
    except ValueError:
        raise InputError(f"bad {what} {tok!r}") from None
    if n < 1:
        raise InputError(f"{what} must be positive")
    return n


def load_matrix(spec: str, seed: int = 0) -> np.ndarray:
    """A matrix from a shorthand or a file path."""
    spec = spec.strip()
    kind, sep, rest = spec.partition(":")
    if sep and kind in ("diag", "eye", "rand", "randh", "randg"):
        if kind == "diag":
            vals = [parse_scalar(t) for t in rest.split(",") if t.strip()]
            if not vals:
                raise InputError("diag: needs at least one entry")
            return _maybe_real(np.diag(np.array(vals, dtype=np.complex128)))
        if kind == "eye":
            return np.eye(_positive_int(rest))
        parts = rest.split(":")
        s = _seed_part(parts, seed)
        rng = np.random.default_rng(s)
        if kind == "randg":
            dims = parts[0].split(",")
            if len(dims) != 2:
                raise InputError("randg: expects m,n")
            m, n = (_positive_int(d) for d in dims)
            return rng.standard_normal((m, n)) + 1j * rng.standard_normal((m, n))
        n = _positive_int(parts[0])
        A = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        if kind == "rand":
            return A @ A.conj().T / n
        return (A + A.conj().T) / 2
    if not os.path.isfile(spec):
        raise InputError(f"no such matrix file or shorthand: {spec!r}")
    with open(spec, encoding="utf-8") as fh:
        return parse_matrix_text(fh.read())


def load_vector(spec: str) -> np.ndarray:
    """Comma-separated entries, or a file holding a single row or column."""
    if os.path.isfile(spec):
        with open(spec, encoding="utf-8") as fh:
            M = parse_matrix_text(fh.read())
        if min(M.shape) != 1:
            raise InputError(f"expected a vector, got shape {M.shape}")
        return M.ravel()
    vals = [parse_scalar(t) for t in spec.split(",") if t.strip()]
    if not vals:
        raise InputError("empty vector")
    return _maybe_real(np.array(vals, dtype=np.complex128))


def load_list(spec: str) -> list[float]:
    try:
        return [float(t) for t in spec.split(",") if t.strip()]
    except ValueError:
        raise InputError(f"cannot parse list {spec!r}") from None
