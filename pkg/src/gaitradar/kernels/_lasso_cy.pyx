# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled coordinate-descent solver for the Gram-form Lasso.

Minimizes 0.5*||D a - y||^2 + xi*||a||_1 given G = D^T D and c = D^T y.
This is the innermost loop of dictionary learning and sparse coding; the
pure-Python twin lives in _lasso_py.py and must stay behaviorally identical.
Tight duality gaps on degenerate instances are finished off by the exact
active-set polish in sparse.coding, not here.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()


cdef inline double _soft(double z, double xi) nogil:
    if z > xi:
        return z - xi
    elif z < -xi:
        return z + xi
    return 0.0


cdef double _sweep(double[:, ::1] gram, double[::1] corr, double xi,
                   double[::1] alpha, double[::1] rho, bint active_only) nogil:
    """One pass of coordinate updates; returns max |delta alpha|."""
    cdef Py_ssize_t j, k, n = alpha.shape[0]
    cdef double gjj, z, a_new, delta, maxdelta = 0.0
    for j in range(n):
        if active_only and alpha[j] == 0.0:
            continue
        gjj = gram[j, j]
        if gjj <= 0.0:
            continue
        z = corr[j] - rho[j] + gjj * alpha[j]
        a_new = _soft(z, xi) / gjj
        delta = a_new - alpha[j]
        if delta != 0.0:
            # gram is symmetric; row access is contiguous
            for k in range(n):
                rho[k] += gram[j, k] * delta
            alpha[j] = a_new
            if delta < 0.0:
                delta = -delta
            if delta > maxdelta:
                maxdelta = delta
    return maxdelta


cdef double _gap(double[:, ::1] gram, double[::1] corr, double ynorm2,
                 double xi, double[::1] alpha, double[::1] rho) nogil:
    cdef Py_ssize_t j, n = alpha.shape[0]
    cdef double l1 = 0.0, resid2 = ynorm2, nu_y = -ynorm2, dinf = 0.0
    cdef double v, primal, scale, dual
    for j in range(n):
        v = alpha[j]
        l1 += v if v >= 0.0 else -v
        resid2 += alpha[j] * (rho[j] - 2.0 * corr[j])
        nu_y += alpha[j] * corr[j]
        v = rho[j] - corr[j]
        if v < 0.0:
            v = -v
        if v > dinf:
            dinf = v
    if resid2 < 0.0:
        resid2 = 0.0
    primal = 0.5 * resid2 + xi * l1
    scale = 1.0 if dinf <= xi else xi / dinf
    dual = -0.5 * scale * scale * resid2 - scale * nu_y
    return primal - dual


def cd_lasso_gram(double[:, ::1] gram, double[::1] corr, double ynorm2,
                  double xi, double[::1] alpha, int max_sweeps, double tol):
    """Run coordinate-descent sweeps in place; returns (duality_gap, sweeps)."""
    cdef Py_ssize_t n = alpha.shape[0]
    cdef int sweeps = 0, inner
    cdef double gap = 0.0, maxdelta

    rho_arr = np.asarray(gram) @ np.asarray(alpha)
    cdef double[::1] rho = np.ascontiguousarray(rho_arr)

    while sweeps < max_sweeps:
        _sweep(gram, corr, xi, alpha, rho, 0)
        sweeps += 1
        for inner in range(10):
            if sweeps >= max_sweeps:
                break
            maxdelta = _sweep(gram, corr, xi, alpha, rho, 1)
            sweeps += 1
            if maxdelta <= 1e-13:
                break
        gap = _gap(gram, corr, ynorm2, xi, alpha, rho)
        if gap <= tol:
            break
    return gap, sweeps
