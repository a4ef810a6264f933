"""Lasso sparse coding against a (possibly merged) dictionary.

Each column y of the data matrix is decomposed by solving

    min_a 0.5 * ||D a - y||^2 + xi * ||a||_1

with coordinate descent on the Gram matrix, run to a small duality gap.
The inner loop is the compiled kernel selected by gaitradar.kernels;
between kernel rounds an exact sign-guarded solve on the current support
finishes off instances where plain cyclic descent crawls (correlated or
rank-deficient supports). Both steps are descent steps, which is what the
dictionary-learning monotonicity guarantee relies on.
"""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from gaitradar.errors import ParameterError
from gaitradar.kernels import cd_lasso_gram
from gaitradar.kernels._lasso_py import duality_gap

DEFAULT_GAP_TOL = 1e-8
DEFAULT_MAX_SWEEPS = 2000
_SWEEPS_PER_ROUND = 16


@dataclass
class Dictionary:
    """Atom matrix (rows x atoms) with optional per-atom direction labels."""

    atoms: np.ndarray
    block_labels: Optional[np.ndarray] = None  # atom -> basic-direction index
    basic_directions_deg: Optional[np.ndarray] = None
    regularizer: float = 0.13
    seed: Optional[int] = None
    objective_history: Optional[list] = None

    @property
    def atom_count(self) -> int:
        return self.atoms.shape[1]

    @property
    def num_rows(self) -> int:
        return self.atoms.shape[0]

    def validate(self):
        norms = np.linalg.norm(self.atoms, axis=0)
        if np.any(norms > 1.0 + 1e-9):
            raise ParameterError("dictionary atoms must have unit norm or less")


@dataclass
class SparseCodes:
    """Coefficient matrix (atoms x samples) and the regularizer used."""

    coefficients: np.ndarray
    regularizer: float
    duality_gaps: Optional[np.ndarray] = None

    @property
    def frobenius_sq(self) -> float:
        return float(np.sum(self.coefficients**2))


def _objective_from_gram(gram, corr, ynorm2, xi, alpha):
    resid2 = max(float(alpha @ (gram @ alpha) - 2.0 * (alpha @ corr) + ynorm2), 0.0)
    return 0.5 * resid2 + xi * float(np.sum(np.abs(alpha)))


def _sign_solve(gsub, rhs):
    try:
        return np.linalg.solve(gsub, rhs)
    except np.linalg.LinAlgError:
        target, *_ = np.linalg.lstsq(gsub, rhs, rcond=None)
        return target


def _active_set_finish(gram, corr, ynorm2, xi, alpha, max_pivots=30, batch_add=8):
    """Pivoting active-set refinement from the coordinate-descent iterate.

    Alternates exact sign-constrained solves on the support with support
    changes (drop coordinates whose guarded step hits zero, add the most
    violated zero coordinates in small batches). rho = gram @ a is tracked
    incrementally, so each pivot costs O(J * |support|). The result replaces
    alpha only if it improves the objective, so interleaving this with
    coordinate descent keeps every step a descent step.
    """
    a = alpha.copy()
    rho = gram @ a
    sup = list(np.nonzero(a)[0])
    signs = {j: np.sign(a[j]) for j in sup}
    viol_tol = 1e-11 * max(1.0, float(np.max(np.abs(corr))) if corr.size else 1.0)

    def objective(vec, vec_rho):
        resid2 = max(float(vec @ vec_rho - 2.0 * (vec @ corr) + ynorm2), 0.0)
        return 0.5 * resid2 + xi * float(np.sum(np.abs(vec)))

    entry_obj = objective(a, rho)
    for _ in range(max_pivots):
        if sup:
            idx = np.array(sup, dtype=int)
            s = np.array([signs[j] for j in sup])
            gsub = gram[np.ix_(idx, idx)]
            target = _sign_solve(gsub, corr[idx] - xi * s)
            cur = a[idx]
            step = target - cur
            crossing = np.where(cur * (cur + step) < 0.0)[0]
            t = 1.0
            if crossing.size:
                t = min(1.0, float(np.min(-cur[crossing] / step[crossing])))
            new = cur + t * step
            new[np.abs(new) < 1e-14] = 0.0
            delta = new - cur
            if np.any(delta):
                rho += gram[:, idx] @ delta
            a[idx] = new
            if t < 1.0 or np.any(new == 0.0):
                dropped = [j for j, v in zip(sup, new) if v == 0.0]
                for j in dropped:
                    signs.pop(j, None)
                sup = [j for j in sup if a[j] != 0.0]
                if dropped:
                    continue
        # stationary on the support: pull in the worst violated zero coords
        grad = corr - rho
        zero = np.ones(a.shape[0], dtype=bool)
        if sup:
            zero[np.array(sup, dtype=int)] = False
        viol = np.where(zero, np.abs(grad) - xi, -np.inf)
        worst = np.argsort(viol)[::-1][:batch_add]
        worst = [int(j) for j in worst if viol[j] > viol_tol]
        if not worst:
            break
        for j in worst:
            sup.append(j)
            signs[j] = np.sign(grad[j])
    if objective(a, rho) < entry_obj:
        alpha[:] = a
        return True
    return False


def _screen_keep(gram, corr, xi, alpha, gap):
    """Gap-safe sphere test: coordinates that can still be nonzero at optimum.

    The dual optimum lies within sqrt(2*gap) of the scaled residual point, so
    any atom with |d_j^T nu| + r*||d_j|| < xi is provably zero and can leave
    the subproblem. Currently nonzero coordinates are always kept so the
    iterate (and the warm-start objective) is preserved exactly.
    """
    rho = gram @ alpha
    resid_corr = rho - corr
    dinf = float(np.max(np.abs(resid_corr))) if resid_corr.size else 0.0
    s = 1.0 if dinf <= xi else xi / dinf
    radius = np.sqrt(max(2.0 * gap, 0.0))
    bound = np.abs(s * resid_corr) + radius * np.sqrt(np.maximum(np.diag(gram), 0.0))
    return (bound >= xi) | (alpha != 0.0)


def _one_round(gram, corr, ynorm2, xi, alpha, budget, gap_tol):
    """One chunk of CD sweeps plus an active-set polish; returns (gap, used)."""
    chunk = min(_SWEEPS_PER_ROUND, budget)
    gap, used = cd_lasso_gram(gram, corr, ynorm2, xi, alpha, chunk, gap_tol)
    if gap > gap_tol and _active_set_finish(gram, corr, ynorm2, xi, alpha):
        gap = duality_gap(gram, corr, ynorm2, xi, alpha)
    return gap, max(used, 1)


def _try_drops(gram, corr, ynorm2, xi, alpha, max_tries=4):
    """Propose removing small support coordinates and re-solving exactly.

    Rank-deficient supports can trap both coordinate descent (geometric decay
    toward zero, never reaching it) and the sign-constrained solve (singular
    system); explicitly zeroing a candidate coordinate and re-solving breaks
    the degeneracy. Only objective-improving proposals are kept.
    """
    sup = np.nonzero(alpha)[0]
    if sup.size == 0:
        return False
    base = _objective_from_gram(gram, corr, ynorm2, xi, alpha)
    order = sup[np.argsort(np.abs(alpha[sup]))]
    for j in order[:max_tries]:
        cand = alpha.copy()
        cand[j] = 0.0
        keep = np.nonzero(cand)[0]
        if keep.size:
            s = np.sign(cand[keep])
            target = _sign_solve(gram[np.ix_(keep, keep)], corr[keep] - xi * s)
            step = target - cand[keep]
            cur = cand[keep]
            crossing = np.where(cur * (cur + step) < 0.0)[0]
            t = 1.0
            if crossing.size:
                t = min(1.0, float(np.min(-cur[crossing] / step[crossing])))
            cand[keep] = cur + t * step
        if _objective_from_gram(gram, corr, ynorm2, xi, cand) < base - 1e-15:
            alpha[:] = cand
            return True
    return False


def _solve_column(gram, corr, ynorm2, xi, alpha, max_sweeps, gap_tol):
    budget = max_sweeps
    # a few full-space sweeps establish a gap for safe screening
    gap, used = cd_lasso_gram(gram, corr, ynorm2, xi, alpha, min(4, budget), gap_tol)
    budget -= max(used, 1)
    stalls = 0
    while budget > 0 and gap > gap_tol:
        prev_gap = gap
        if stalls >= 2:
            # degenerate instance: drop proposals plus long plain descent and
            # conservative one-at-a-time pivoting, which cannot cycle fast
            moved = _try_drops(gram, corr, ynorm2, xi, alpha)
            chunk = min(64 if moved else 256, budget)
            gap, used = cd_lasso_gram(gram, corr, ynorm2, xi, alpha, chunk, gap_tol)
            budget -= max(used, 1)
            if gap > gap_tol and _active_set_finish(
                gram, corr, ynorm2, xi, alpha, max_pivots=200, batch_add=1
            ):
                gap = duality_gap(gram, corr, ynorm2, xi, alpha)
        else:
            keep = _screen_keep(gram, corr, xi, alpha, gap)
            if keep.sum() < keep.size:
                idx = np.nonzero(keep)[0]
                sub_alpha = np.ascontiguousarray(alpha[idx])
                sub_gap, used = _one_round(
                    np.ascontiguousarray(gram[np.ix_(idx, idx)]),
                    np.ascontiguousarray(corr[idx]),
                    ynorm2,
                    xi,
                    sub_alpha,
                    budget,
                    0.5 * gap_tol,
                )
                budget -= used
                alpha[:] = 0.0
                alpha[idx] = sub_alpha
                # the certificate must hold over every atom, not just the subset
                gap = duality_gap(gram, corr, ynorm2, xi, alpha) if sub_gap <= 0.5 * gap_tol else sub_gap
            else:
                gap, used = _one_round(gram, corr, ynorm2, xi, alpha, budget, gap_tol)
                budget -= used
        stalls = stalls + 1 if gap > 0.9 * prev_gap else 0
    return gap


def sparse_code(
    dictionary: Dictionary,
    data: np.ndarray,
    regularizer: float,
    gap_tol: float = DEFAULT_GAP_TOL,
    max_sweeps: int = DEFAULT_MAX_SWEEPS,
    warm_start: Optional[np.ndarray] = None,
    precomputed_gram: Optional[np.ndarray] = None,
) -> SparseCodes:
    """Decompose every column of data in the dictionary (columnwise Lasso).

    Pass precomputed_gram = atoms.T @ atoms when coding many batches against
    the same dictionary to skip rebuilding the Gram matrix per call.
    """
    d = np.ascontiguousarray(dictionary.atoms, dtype=np.float64)
    y = np.asarray(data, dtype=np.float64)
    if y.ndim == 1:
        y = y[:, None]
    if d.shape[0] != y.shape[0]:
        raise ParameterError("dictionary and data row counts differ")
    if regularizer <= 0:
        raise ParameterError("regularizer must be positive")

    gram = np.ascontiguousarray(d.T @ d) if precomputed_gram is None else precomputed_gram
    corr_all = d.T @ y
    ynorm2_all = np.sum(y * y, axis=0)

    n_atoms, n_cols = d.shape[1], y.shape[1]
    alpha = np.zeros((n_atoms, n_cols), dtype=np.float64)
    if warm_start is not None:
        alpha[:] = warm_start
    gaps = np.empty(n_cols)
    for j in range(n_cols):
        a = np.ascontiguousarray(alpha[:, j])
        gaps[j] = _solve_column(
            gram,
            np.ascontiguousarray(corr_all[:, j]),
            float(ynorm2_all[j]),
            float(regularizer),
            a,
            int(max_sweeps),
            float(gap_tol),
        )
        alpha[:, j] = a
    return SparseCodes(alpha, regularizer, gaps)


def lasso_objective(dictionary: Dictionary, data: np.ndarray, codes: SparseCodes) -> float:
    resid = dictionary.atoms @ codes.coefficients - data
    return 0.5 * float(np.sum(resid**2)) + codes.regularizer * float(np.sum(np.abs(codes.coefficients)))
