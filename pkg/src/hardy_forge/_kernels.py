"""Compiled inertia counters used by the spectral bisection.

Both return the number of negative pivots of a symmetric factorization of
``A - lam * B``, or -1 when a pivot is exactly zero.
"""

import numba
import numpy as np


@numba.njit(cache=True, nogil=True)
def count_banded(ab, bdiag, lam):
    """LDL^T of a banded matrix in lower storage ``ab[d, j] = A[j + d, j]``."""
    bw = ab.shape[0] - 1
    n = ab.shape[1]
    L = np.zeros((bw + 1, n))
    D = np.zeros(n)
    neg = 0
    for j in range(n):
        s = ab[0, j] - lam * bdiag[j]
        for k in range(max(0, j - bw), j):
            l = L[j - k, k]
            s -= l * l * D[k]
        if s == 0.0:
            return -1
        D[j] = s
        if s < 0.0:
            neg += 1
        for i in range(j + 1, min(n, j + bw + 1)):
            t = ab[i - j, j]
            for k in range(max(0, i - bw), j):
                t -= L[i - k, k] * L[j - k, k] * D[k]
            L[i - j, j] = t / s
    return neg


@numba.njit(cache=True, nogil=True)
def count_difference(V0, wstage, bvals, lam):
    """Backward elimination in the variables ``f(n) = D^r u(n)``.

    The state after step ``n`` is ``x = (u, Du, ..., D^(r-1) u)(n)`` and
    ``V`` is the quadratic form, in ``x``, of everything to the right of
    ``n``.  Substituting ``x_n = U x_(n-1) + f(n) * ones`` (``U`` upper
    triangular of ones) turns ``V`` into a 2-D prefix sum, so one stage costs
    O(r^2).  ``V`` is kept exactly symmetric.  ``V0`` is the form of the
    boundary terms past the window.
    """
    r = V0.shape[0]
    nst = wstage.shape[0]
    V = V0.copy()
    P = np.zeros((r, r))
    neg = 0
    for idx in range(nst - 1, -1, -1):
        V[0, 0] -= lam * bvals[idx]
        for p in range(r):
            acc = 0.0
            for q in range(r):
                acc += V[p, q]
                P[p, q] = acc + (P[p - 1, q] if p > 0 else 0.0)
        piv = P[r - 1, r - 1] + wstage[idx]
        if piv == 0.0:
            return -1
        if piv < 0.0:
            neg += 1
        # write both triangles from one: rounding asymmetry would otherwise grow
        for p in range(r):
            cp = P[r - 1, p]
            for q in range(p, r):
                v = P[min(p, q), max(p, q)] - cp * P[r - 1, q] / piv
                V[p, q] = v
                V[q, p] = v
    return neg
