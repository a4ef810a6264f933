"""Dictionary learning by alternating sparse coding and atom updates.

Minimizes 0.5*||D A - Y||_F^2 + xi * sum_m ||a_m||_1 over both D (atoms
constrained to the unit ball) and A. Both half-steps are exact block
coordinate minimizations from warm starts, so the objective is
non-increasing across alternations; the tests assert that invariant.
"""

import numpy as np

from gaitradar.errors import ParameterError
from gaitradar.sparse.coding import Dictionary, SparseCodes, lasso_objective, sparse_code


def _init_atoms(data, num_atoms, rng):
    """Atoms from distinct random training columns, normalized to unit norm."""
    n_rows, n_cols = data.shape
    if n_cols >= num_atoms:
        cols = rng.choice(n_cols, size=num_atoms, replace=False)
        atoms = data[:, cols].astype(np.float64).copy()
    else:
        atoms = np.zeros((n_rows, num_atoms))
        atoms[:, :n_cols] = data
    norms = np.linalg.norm(atoms, axis=0)
    for j in range(num_atoms):
        if norms[j] < 1e-12:
            v = rng.standard_normal(n_rows)
            atoms[:, j] = v / np.linalg.norm(v)
        else:
            atoms[:, j] /= norms[j]
    return atoms


def _update_atoms(atoms, data, coeffs):
    """One BCD pass over atoms under ||d_j|| <= 1; exact per-atom minimizer."""
    gram_a = coeffs @ coeffs.T  # (J, J)
    proj = data @ coeffs.T  # (rows, J)
    dead = []
    for j in range(atoms.shape[1]):
        sjj = gram_a[j, j]
        if sjj <= 1e-12:
            dead.append(j)
            continue
        v = proj[:, j] - atoms @ gram_a[:, j] + atoms[:, j] * sjj
        v /= sjj
        norm = np.linalg.norm(v)
        if norm > 1.0:
            v /= norm
        atoms[:, j] = v
    return dead


def _revive_dead_atoms(atoms, data, coeffs, dead, rng):
    """Replace unused atoms by the worst-reconstructed training columns."""
    if not dead:
        return
    resid = data - atoms @ coeffs
    errs = np.sum(resid**2, axis=0)
    order = np.argsort(errs)[::-1]
    for rank, j in enumerate(dead):
        col = data[:, order[rank % order.size]]
        norm = np.linalg.norm(col)
        if norm < 1e-12:
            col = rng.standard_normal(atoms.shape[0])
            norm = np.linalg.norm(col)
        atoms[:, j] = col / norm


def learn_dictionary(
    data: np.ndarray,
    num_atoms: int,
    regularizer: float,
    max_iters: int = 60,
    tol: float = 1e-5,
    rng=None,
    seed: int = 0,
    gap_tol: float = 1e-8,
):
    """Learn (Dictionary, SparseCodes) from the columns of data.

    Stops when the relative objective decrease falls below tol or after
    max_iters alternations. Deterministic given the generator state.
    """
    data = np.asarray(data, dtype=np.float64)
    if data.ndim != 2 or data.size == 0:
        raise ParameterError("training data must be a nonempty matrix")
    if num_atoms < 1:
        raise ParameterError("need at least one atom")
    if rng is None:
        rng = np.random.default_rng(seed)

    atoms = _init_atoms(data, num_atoms, rng)
    dictionary = Dictionary(atoms, regularizer=regularizer, seed=seed)
    codes = None
    history = []
    prev = np.inf
    for _ in range(max_iters):
        codes = sparse_code(
            dictionary,
            data,
            regularizer,
            gap_tol=gap_tol,
            warm_start=None if codes is None else codes.coefficients,
        )
        dead = _update_atoms(atoms, data, codes.coefficients)
        obj = lasso_objective(dictionary, data, codes)
        history.append(obj)
        _revive_dead_atoms(atoms, data, codes.coefficients, dead, rng)
        if np.isfinite(prev) and prev - obj <= tol * max(abs(prev), 1e-12):
            break
        prev = obj

    # final coding against the settled dictionary
    codes = sparse_code(dictionary, data, regularizer, gap_tol=gap_tol, warm_start=codes.coefficients)
    history.append(lasso_objective(dictionary, data, codes))
    dictionary.objective_history = history
    return dictionary, codes


def merge_dictionaries(per_direction, directions_deg) -> Dictionary:
    """Concatenate per-direction dictionaries into one labeled dictionary."""
    dicts = list(per_direction)
    directions = np.asarray(directions_deg, dtype=float)
    if len(dicts) == 0 or len(dicts) != directions.size:
        raise ParameterError("need one dictionary per direction")
    rows = dicts[0].num_rows
    if any(d.num_rows != rows for d in dicts):
        raise ParameterError("mismatched row counts across dictionaries")
    atoms = np.hstack([d.atoms for d in dicts])
    labels = np.concatenate([np.full(d.atom_count, i, dtype=int) for i, d in enumerate(dicts)])
    return Dictionary(
        atoms,
        block_labels=labels,
        basic_directions_deg=directions,
        regularizer=dicts[0].regularizer,
    )
