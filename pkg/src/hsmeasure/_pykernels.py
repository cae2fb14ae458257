"""Numpy implementations of the enumeration kernels.

Same signatures and return values as the compiled ``_ckernels`` module.
Enumeration is split into a low block of coordinates whose partial sums
are tabulated once and a high block walked in a Python loop, so memory
stays at ``2**LOW_BITS`` entries regardless of the length.
"""
import numpy as np

LOW_BITS = 14


def _sign_table(values):
    """Rows are ``sum_k eps_k values[k]`` for every sign vector, bit k <-> index k."""
    values = np.asarray(values)
    table = np.zeros((1,) + values.shape[1:], dtype=values.dtype)
    for v in values:
        table = np.concatenate([table + v, table - v])
    return table


def _split(n):
    low = min(n, LOW_BITS)
    return low, n - low


def _signs_from_index(i, n):
    return np.array([-1 if (i >> k) & 1 else 1 for k in range(n)], dtype=np.int8)


def sign_moment(re, im, p):
    a = np.asarray(re, dtype=np.float64) + 1j * np.asarray(im, dtype=np.float64)
    n = len(a)
    if n == 0:
        return 0.0
    # fix the first sign to +1
    rest = a[1:]
    low, high = _split(n - 1)
    table = _sign_table(rest[:low]) + a[0]
    acc = 0.0
    for h in range(1 << high):
        shift = np.dot(_signs_from_index(h, high), rest[low:]) if high else 0.0
        r2 = np.abs(table + shift) ** 2
        if p == 2.0:
            acc += r2.sum()
        elif p == 1.0:
            acc += np.sqrt(r2).sum()
        else:
            acc += np.power(r2, p / 2.0).sum()
    return float(acc / (1 << (n - 1)))


def sign_tail_counts(a, thresholds):
    a = np.asarray(a, dtype=np.float64)
    thresholds = np.asarray(thresholds, dtype=np.float64)
    n = len(a)
    if n == 0:
        return np.zeros(len(thresholds), dtype=np.int64)
    rest = a[1:]
    low, high = _split(n - 1)
    table = _sign_table(rest[:low]) + a[0]
    counts = np.zeros(len(thresholds), dtype=np.int64)
    for h in range(1 << high):
        shift = np.dot(_signs_from_index(h, high), rest[low:]) if high else 0.0
        s = np.sort(np.abs(table + shift))
        counts += len(s) - np.searchsorted(s, thresholds, side="right")
    return counts * 2


def max_sign_norm(phi):
    phi = np.asarray(phi, dtype=np.float64)
    n = phi.shape[0]
    if n == 0:
        return 0.0, np.ones(0, dtype=np.int8)
    rest = phi[1:]
    low, high = _split(n - 1)
    table = _sign_table(rest[:low]) + phi[0]
    best, best_idx = -1.0, (0, 0)
    for h in range(1 << high):
        shift = _signs_from_index(h, high) @ rest[low:] if high else 0.0
        sq = np.einsum("ij,ij->i", table + shift, table + shift)
        i = int(np.argmax(sq))
        if sq[i] > best:
            best, best_idx = sq[i], (h, i)
    h, i = best_idx
    signs = np.concatenate([[1], _signs_from_index(i, low), _signs_from_index(h, high)])
    signs = signs.astype(np.int8)
    vec = signs.astype(np.float64) @ phi
    return float(np.sqrt(vec @ vec)), signs


def max_subset_modulus(re, im):
    lam = np.asarray(re, dtype=np.float64) + 1j * np.asarray(im, dtype=np.float64)
    n = len(lam)
    if n == 0:
        return 0.0, 0
    low, high = _split(n)
    # subset sums: (sign sum + total) / 2 with bit k set <-> coordinate k excluded
    table = (_sign_table(lam[:low]) + lam[:low].sum()) / 2
    best, best_mask = 0.0, 0
    full_low = (1 << low) - 1
    for h in range(1 << high):
        hmask = h << low
        shift = sum(lam[low + k] for k in range(high) if (h >> k) & 1)
        vals = np.abs(table + shift)
        i = int(np.argmax(vals))
        if vals[i] > best:
            best, best_mask = vals[i], hmask | (full_low ^ i)
    total = sum(lam[k] for k in range(n) if (best_mask >> k) & 1)
    return float(abs(total)), int(best_mask)


def max_sign_l1(x):
    x = np.asarray(x, dtype=np.float64)
    n = x.shape[1]
    if n == 0:
        return 0.0, np.ones(0, dtype=np.int8)
    cols = x.T
    rest = cols[1:]
    low, high = _split(n - 1)
    table = _sign_table(rest[:low]) + cols[0]
    best, best_idx = -1.0, (0, 0)
    for h in range(1 << high):
        shift = _signs_from_index(h, high) @ rest[low:] if high else 0.0
        vals = np.abs(table + shift).sum(axis=1)
        i = int(np.argmax(vals))
        if vals[i] > best:
            best, best_idx = vals[i], (h, i)
    h, i = best_idx
    signs = np.concatenate([[1], _signs_from_index(i, low), _signs_from_index(h, high)])
    signs = signs.astype(np.int8)
    return float(np.abs(x @ signs.astype(np.float64)).sum()), signs
