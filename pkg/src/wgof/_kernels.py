"""Compiled inner loops for the semi-discrete solver.

All kernels release the GIL so that independent solves can run on worker
threads.  Reductions run in a fixed sequential order, which keeps results
bit-reproducible.
"""
import numpy as np
from numba import njit


@njit(cache=True, nogil=True, inline="always")
def _cost(ref, k, atoms, i, p):
    s = 0.0
    for j in range(atoms.shape[1]):
        q = ref[k, j] - atoms[i, j]
        s += q * q
    if p == 2.0:
        return s
    if p == 1.0:
        return np.sqrt(s)
    return s ** (0.5 * p)


@njit(cache=True, nogil=True)
def assign(atoms, pts, p, v, out):
    """Fill ``out[k] = argmin_i c(pts[k], atoms[i]) - v[i]``; return the sum of minima.

    Ties go to the lowest index.
    """
    n = atoms.shape[0]
    total = 0.0
    for k in range(pts.shape[0]):
        best = np.inf
        ib = 0
        for i in range(n):
            c = _cost(pts, k, atoms, i, p) - v[i]
            if c < best:
                best = c
                ib = i
        out[k] = ib
        total += best
    return total


@njit(cache=True, nogil=True)
def assign_weighted(atoms, pts, wts, p, v, out):
    """Weighted variant of :func:`assign`: returns sum_k wts[k] * min_i(...)."""
    n = atoms.shape[0]
    total = 0.0
    for k in range(pts.shape[0]):
        best = np.inf
        ib = 0
        for i in range(n):
            c = _cost(pts, k, atoms, i, p) - v[i]
            if c < best:
                best = c
                ib = i
        out[k] = ib
        total += wts[k] * best
    return total


@njit(cache=True, nogil=True)
def sag_pass(atoms, w, ref, idx, p, step, a, rate, stored, counts, t0):
    """One pass of stochastic average gradient ascent on the semi-dual.

    The averaged gradient is ``w - counts / M`` where ``counts[i]`` is the
    number of reference points whose stored assignment is atom ``i``.  Between
    changes of ``counts[i]`` the potential moves linearly, so it is kept
    lazily as ``v[i](t) = a[i] + t * rate[i]`` and only the two touched
    coordinates are rebased when an assignment changes.
    """
    n = atoms.shape[0]
    inv_m = 1.0 / ref.shape[0]
    t = t0
    for it in range(idx.shape[0]):
        k = idx[it]
        best = np.inf
        ib = 0
        for i in range(n):
            c = _cost(ref, k, atoms, i, p) - (a[i] + t * rate[i])
            if c < best:
                best = c
                ib = i
        old = stored[k]
        if old != ib:
            vo = a[old] + t * rate[old]
            counts[old] -= 1.0
            rate[old] = step * (w[old] - counts[old] * inv_m)
            a[old] = vo - t * rate[old]
            vb = a[ib] + t * rate[ib]
            counts[ib] += 1.0
            rate[ib] = step * (w[ib] - counts[ib] * inv_m)
            a[ib] = vb - t * rate[ib]
            stored[k] = ib
        t += 1.0
    return t
