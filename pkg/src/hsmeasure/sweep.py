"""Exact maximization of planar half-plane sums by an angular sweep."""
from __future__ import annotations

import math

import numpy as np


def max_halfplane_sum(vectors) -> tuple[float, np.ndarray, np.ndarray]:
    """Maximize ``|sum_{j in J} v_j|`` over subsets ``J`` of planar vectors.

    The optimum is a half-plane set ``J = {j : (v_j, e) > 0}``, and the active
    set is constant on each arc between the critical angles
    ``arg v_j +- pi/2``; walking those angles in order toggles one vector
    per event, so the sweep costs ``O(n log n)``.

    Returns ``(value, e0, J)`` with ``e0`` a unit maximizer of
    ``g(e) = sum_j (v_j, e)_+`` and ``J`` the strict positive set of ``e0``.
    """
    v = np.asarray(vectors, dtype=float).reshape(-1, 2)
    v = v[np.hypot(v[:, 0], v[:, 1]) > 0]
    if len(v) == 0:
        return 0.0, np.array([1.0, 0.0]), np.zeros(0, dtype=int)
    phi = np.arctan2(v[:, 1], v[:, 0])
    two_pi = 2 * math.pi
    enter = np.mod(phi - math.pi / 2, two_pi)
    leave = np.mod(phi + math.pi / 2, two_pi)
    angles = np.concatenate([enter, leave])
    owner = np.concatenate([np.arange(len(v)), np.arange(len(v))])
    order = np.argsort(angles, kind="stable")
    angles, owner = angles[order], owner[order]

    # start in the middle of the arc that wraps past 2*pi; it holds no events
    start = (angles[-1] + angles[0] + two_pi) / 2
    e = np.array([math.cos(start), math.sin(start)])
    active = (v @ e) > 0
    w = v[active].sum(axis=0) if active.any() else np.zeros(2)
    best_w = w.copy()
    best = float(np.hypot(*w))
    k = 0
    n_events = len(angles)
    while k < n_events:
        a = angles[k]
        while k < n_events and angles[k] == a:
            j = owner[k]
            if active[j]:
                active[j] = False
                w = w - v[j]
            else:
                active[j] = True
                w = w + v[j]
            k += 1
        val = float(np.hypot(*w))
        if val > best:
            best, best_w = val, w.copy()
    if best == 0.0:
        e0 = v[0] / np.hypot(*v[0])
    else:
        e0 = best_w / best
    J = np.flatnonzero(v @ e0 > 0)
    value = float(np.hypot(*v[J].sum(axis=0)))
    return value, e0, J


def max_subset_modulus_sweep(values) -> tuple[float, np.ndarray]:
    """``max_A |sum_{i in A} z_i|`` for complex scalars, with the maximizing indices."""
    z = np.asarray(values, dtype=np.complex128)
    nz = np.flatnonzero(z != 0)
    if len(nz) == 0:
        return 0.0, np.zeros(0, dtype=int)
    value, _, J = max_halfplane_sum(np.column_stack([z[nz].real, z[nz].imag]))
    return value, nz[J]
