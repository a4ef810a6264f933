"""Pure-NumPy twin of the compiled coordinate-descent Lasso kernel.

Kept behaviorally identical to _lasso_cy (same updates, same stopping rule)
so the two backends are interchangeable; it is much slower on large atom
counts, see benchmarks/bench_lasso.py.
"""

import numpy as np


def _soft(z, xi):
    if z > xi:
        return z - xi
    if z < -xi:
        return z + xi
    return 0.0


def _sweep(gram, corr, xi, alpha, rho, active_only):
    maxdelta = 0.0
    idx = np.nonzero(alpha)[0] if active_only else range(alpha.shape[0])
    for j in idx:
        gjj = gram[j, j]
        if gjj <= 0.0:
            continue
        z = corr[j] - rho[j] + gjj * alpha[j]
        a_new = _soft(z, xi) / gjj
        delta = a_new - alpha[j]
        if delta != 0.0:
            rho += gram[j, :] * delta  # symmetric gram, contiguous row
            alpha[j] = a_new
            maxdelta = max(maxdelta, abs(delta))
    return maxdelta


def duality_gap(gram, corr, ynorm2, xi, alpha, rho=None):
    if rho is None:
        rho = gram @ alpha
    resid2 = max(float(alpha @ rho - 2.0 * (alpha @ corr) + ynorm2), 0.0)
    primal = 0.5 * resid2 + xi * float(np.sum(np.abs(alpha)))
    dinf = float(np.max(np.abs(rho - corr))) if alpha.shape[0] else 0.0
    scale = 1.0 if dinf <= xi else xi / dinf
    nu_y = float(alpha @ corr) - ynorm2
    dual = -0.5 * scale * scale * resid2 - scale * nu_y
    return primal - dual


def cd_lasso_gram(gram, corr, ynorm2, xi, alpha, max_sweeps, tol):
    """Run coordinate-descent sweeps in place; returns (duality_gap, sweeps).

    Works on Gram quantities only: gram = D^T D, corr = D^T y, ynorm2 = ||y||^2.
    alpha is used as warm start and overwritten.
    """
    rho = gram @ alpha
    sweeps = 0
    gap = 0.0
    while sweeps < max_sweeps:
        _sweep(gram, corr, xi, alpha, rho, False)
        sweeps += 1
        for _ in range(10):
            if sweeps >= max_sweeps:
                break
            maxdelta = _sweep(gram, corr, xi, alpha, rho, True)
            sweeps += 1
            if maxdelta <= 1e-13:
                break
        gap = duality_gap(gram, corr, ynorm2, xi, alpha, rho)
        if gap <= tol:
            break
    return gap, sweeps
