# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled enumeration kernels.

Each routine enumerates every sign pattern (or subset) of a short list.
The low ``LOW`` coordinates are tabulated once; the remaining high
coordinates are walked pattern by pattern and their partial sum is
added to every table entry in a tight loop.  Sums are therefore built in
a fixed order with no incremental drift.  ``_pykernels`` holds the numpy
twins and must agree up to round-off.
"""
import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, pow, fabs, exp, log

cnp.import_array()

cdef enum:
    LOW = 12


cdef double[::1] _table_1d(const double[::1] v, Py_ssize_t start, Py_ssize_t count, double base):
    # entry with bit k set has coordinate start+k negated
    cdef Py_ssize_t size = 1 << count
    cdef Py_ssize_t k, j, half
    out = np.empty(size)
    cdef double[::1] t = out
    t[0] = base
    half = 1
    for k in range(count):
        for j in range(half):
            t[j + half] = t[j] - v[start + k]
            t[j] = t[j] + v[start + k]
        half <<= 1
    return t


cdef double[:, ::1] _table_2d(const double[:, ::1] v, Py_ssize_t start, Py_ssize_t count,
                              const double[::1] base):
    cdef Py_ssize_t size = 1 << count
    cdef Py_ssize_t d = v.shape[1]
    cdef Py_ssize_t k, j, c, half
    out = np.empty((size, d))
    cdef double[:, ::1] t = out
    for c in range(d):
        t[0, c] = base[c]
    half = 1
    for k in range(count):
        for j in range(half):
            for c in range(d):
                t[j + half, c] = t[j, c] - v[start + k, c]
                t[j, c] = t[j, c] + v[start + k, c]
        half <<= 1
    return t


cdef inline double _high_sum(const double[::1] v, Py_ssize_t start, Py_ssize_t count,
                             unsigned long long h) nogil:
    cdef double s = 0.0
    cdef Py_ssize_t k
    for k in range(count):
        if (h >> k) & 1ULL:
            s -= v[start + k]
        else:
            s += v[start + k]
    return s


cdef inline double _abs_pow(double r2, double p, int mode) nogil:
    cdef double r
    if mode == 2:
        return r2
    r = sqrt(r2)
    if mode == 1:
        return r
    if mode == 3:
        return r2 * r
    if mode == 4:
        return r2 * r2
    if mode == 5:  # p = 1.5
        return r * sqrt(r)
    if r2 == 0.0:
        return 0.0
    return exp(0.5 * p * log(r2))


def sign_moment(const double[::1] re, const double[::1] im, double p):
    """Mean of ``|sum_k eps_k a_k|**p`` over all sign vectors ``eps``."""
    cdef Py_ssize_t n = re.shape[0]
    if n == 0:
        return 0.0
    cdef Py_ssize_t low = min(n - 1, <Py_ssize_t> LOW)
    cdef Py_ssize_t high = n - 1 - low
    cdef Py_ssize_t size = 1 << low
    cdef Py_ssize_t j
    cdef unsigned long long h
    cdef double hr, hi, sr, si, acc = 0.0, part
    cdef int mode = 0
    if p == 1.0:
        mode = 1
    elif p == 2.0:
        mode = 2
    elif p == 3.0:
        mode = 3
    elif p == 4.0:
        mode = 4
    elif p == 1.5:
        mode = 5
    # first sign fixed to +1: |s| is even under a global flip
    cdef double[::1] tr = _table_1d(re, 1, low, re[0])
    cdef double[::1] ti = _table_1d(im, 1, low, im[0])
    with nogil:
        for h in range(1ULL << high):
            hr = _high_sum(re, 1 + low, high, h)
            hi = _high_sum(im, 1 + low, high, h)
            part = 0.0
            for j in range(size):
                sr = tr[j] + hr
                si = ti[j] + hi
                part += _abs_pow(sr * sr + si * si, p, mode)
            acc += part
    return acc / <double> (1ULL << (n - 1))


def sign_tail_counts(const double[::1] a, const double[::1] thresholds):
    """For sorted ``thresholds`` count patterns with ``|sum eps_k a_k| > t``."""
    cdef Py_ssize_t n = a.shape[0]
    cdef Py_ssize_t m = thresholds.shape[0]
    if n == 0:
        return np.zeros(m, dtype=np.int64)
    cdef Py_ssize_t low = min(n - 1, <Py_ssize_t> LOW)
    cdef Py_ssize_t high = n - 1 - low
    cdef Py_ssize_t size = 1 << low
    cdef Py_ssize_t j, lo, base, length, half
    cdef unsigned long long h
    cdef double hs, s
    hist_arr = np.zeros(m + 1, dtype=np.int64)
    cdef long long[::1] hist = hist_arr
    cdef double[::1] t = _table_1d(a, 1, low, a[0])
    with nogil:
        for h in range(1ULL << high):
            hs = _high_sum(a, 1 + low, high, h)
            for j in range(size):
                s = fabs(t[j] + hs)
                # branchless lower bound: thresholds strictly below s
                base = 0
                length = m
                while length > 1:
                    half = length >> 1
                    if thresholds[base + half - 1] < s:
                        base += half
                    length -= half
                lo = base + (1 if (m > 0 and thresholds[base] < s) else 0)
                hist[lo] += 1
    # hist[c] = patterns exceeding exactly the first c thresholds
    out = np.cumsum(hist_arr[::-1])[::-1][1:] * 2
    return np.ascontiguousarray(out, dtype=np.int64)


def _decode_signs(Py_ssize_t n, Py_ssize_t low, unsigned long long h, Py_ssize_t j):
    out = np.ones(n, dtype=np.int8)
    cdef Py_ssize_t k
    for k in range(low):
        if (j >> k) & 1:
            out[1 + k] = -1
    for k in range(n - 1 - low):
        if (h >> k) & 1ULL:
            out[1 + low + k] = -1
    return out


def max_sign_norm(const double[:, ::1] phi):
    """Max over sign vectors of the Euclidean norm of ``sum eps_i phi[i]``."""
    cdef Py_ssize_t n = phi.shape[0]
    cdef Py_ssize_t d = phi.shape[1]
    if n == 0:
        return 0.0, np.ones(0, dtype=np.int8)
    cdef Py_ssize_t low = min(n - 1, <Py_ssize_t> LOW)
    cdef Py_ssize_t high = n - 1 - low
    cdef Py_ssize_t size = 1 << low
    cdef Py_ssize_t j, c, k, best_j = 0
    cdef unsigned long long h, best_h = 0
    cdef double val, x, best = -1.0
    cdef double[::1] hv = np.zeros(d)
    cdef double[:, ::1] t = _table_2d(phi, 1, low, phi[0])
    with nogil:
        for h in range(1ULL << high):
            for c in range(d):
                hv[c] = 0.0
                for k in range(high):
                    if (h >> k) & 1ULL:
                        hv[c] -= phi[1 + low + k, c]
                    else:
                        hv[c] += phi[1 + low + k, c]
            for j in range(size):
                val = 0.0
                for c in range(d):
                    x = t[j, c] + hv[c]
                    val += x * x
                if val > best:
                    best = val
                    best_j = j
                    best_h = h
    signs = _decode_signs(n, low, best_h, best_j)
    vec = signs.astype(np.float64) @ np.asarray(phi)
    return float(np.sqrt(vec @ vec)), signs


def max_subset_modulus(const double[::1] re, const double[::1] im):
    """Max over subsets ``A`` of ``|sum_{i in A} lambda_i|``; returns the mask."""
    cdef Py_ssize_t n = re.shape[0]
    if n == 0:
        return 0.0, 0
    cdef Py_ssize_t low = min(n, <Py_ssize_t> LOW)
    cdef Py_ssize_t high = n - low
    cdef Py_ssize_t size = 1 << low
    cdef Py_ssize_t j, k, best_j = 0
    cdef unsigned long long h, best_h = 0
    cdef double hr, hi, sr, si, val, best = -1.0
    # subset sums over the low block, bit k set <-> coordinate k included
    tr_arr = np.zeros(size)
    ti_arr = np.zeros(size)
    cdef double[::1] tr = tr_arr
    cdef double[::1] ti = ti_arr
    for j in range(1, size):
        k = 0
        while not (j >> k) & 1:
            k += 1
        tr[j] = tr[j ^ (1 << k)] + re[k]
        ti[j] = ti[j ^ (1 << k)] + im[k]
    with nogil:
        for h in range(1ULL << high):
            hr = 0.0
            hi = 0.0
            for k in range(high):
                if (h >> k) & 1ULL:
                    hr += re[low + k]
                    hi += im[low + k]
            for j in range(size):
                sr = tr[j] + hr
                si = ti[j] + hi
                val = sr * sr + si * si
                if val > best:
                    best = val
                    best_j = j
                    best_h = h
    mask = int(best_j) | (int(best_h) << low)
    total = 0j
    for k in range(n):
        if (mask >> k) & 1:
            total += complex(re[k], im[k])
    return float(abs(total)), mask


def max_sign_l1(const double[:, ::1] x):
    """Max over sign vectors ``eps`` of ``sum_j |sum_i x[j, i] eps_i|``."""
    cdef Py_ssize_t rows = x.shape[0]
    cdef Py_ssize_t n = x.shape[1]
    if n == 0:
        return 0.0, np.ones(0, dtype=np.int8)
    cols = np.ascontiguousarray(np.asarray(x).T)
    cdef double[:, ::1] cv = cols
    cdef Py_ssize_t low = min(n - 1, <Py_ssize_t> LOW)
    cdef Py_ssize_t high = n - 1 - low
    cdef Py_ssize_t size = 1 << low
    cdef Py_ssize_t j, r, k, best_j = 0
    cdef unsigned long long h, best_h = 0
    cdef double val, best = -1.0
    cdef double[::1] hv = np.zeros(rows)
    cdef double[:, ::1] t = _table_2d(cv, 1, low, cv[0])
    with nogil:
        for h in range(1ULL << high):
            for r in range(rows):
                hv[r] = 0.0
                for k in range(high):
                    if (h >> k) & 1ULL:
                        hv[r] -= cv[1 + low + k, r]
                    else:
                        hv[r] += cv[1 + low + k, r]
            for j in range(size):
                val = 0.0
                for r in range(rows):
                    val += fabs(t[j, r] + hv[r])
                if val > best:
                    best = val
                    best_j = j
                    best_h = h
    signs = _decode_signs(n, low, best_h, best_j)
    value = np.abs(np.asarray(x) @ signs.astype(np.float64)).sum()
    return float(value), signs
