import numpy as np
import pytest

from gaitradar.errors import ParameterError
from gaitradar.sparse import (
    Dictionary,
    learn_dictionary,
    lasso_objective,
    merge_dictionaries,
    sparse_code,
)


def planted_problem(rng, rows=16, atoms=8, cols=120, sparsity=3):
    d_true = rng.standard_normal((rows, atoms))
    d_true /= np.linalg.norm(d_true, axis=0)
    a_true = np.zeros((atoms, cols))
    for m in range(cols):
        sup = rng.choice(atoms, size=sparsity, replace=False)
        a_true[sup, m] = rng.normal(0.0, 1.0, size=sparsity)
    return d_true, a_true, d_true @ a_true


def recon_snr_db(y, approx):
    return 10 * np.log10(np.sum(y**2) / np.sum((y - approx) ** 2))


def test_self_representation_with_as_many_atoms_as_columns():
    rng = np.random.default_rng(0)
    y = rng.standard_normal((12, 10))
    d, codes = learn_dictionary(y, num_atoms=10, regularizer=1e-6, max_iters=40, rng=np.random.default_rng(1))
    err = np.linalg.norm(d.atoms @ codes.coefficients - y) / np.linalg.norm(y)
    assert err < 1e-3


def test_planted_sparse_model_recovered_to_40db():
    rng = np.random.default_rng(2)
    _, _, y = planted_problem(rng)
    d, codes = learn_dictionary(y, num_atoms=8, regularizer=1e-4, max_iters=120, tol=1e-12, rng=np.random.default_rng(3))
    assert recon_snr_db(y, d.atoms @ codes.coefficients) >= 40.0


def test_objective_monotone_nonincreasing():
    rng = np.random.default_rng(4)
    y = rng.standard_normal((20, 60))
    d, _ = learn_dictionary(y, num_atoms=12, regularizer=0.1, max_iters=50, tol=0.0, rng=np.random.default_rng(5))
    hist = np.array(d.objective_history)
    assert hist.size >= 3
    assert np.all(np.diff(hist) <= 1e-9)


def test_atom_norms_bounded_after_every_iteration():
    y = np.random.default_rng(6).standard_normal((15, 40))
    for iters in (1, 2, 3, 5):
        d, _ = learn_dictionary(y, num_atoms=9, regularizer=0.05, max_iters=iters, tol=0.0, rng=np.random.default_rng(7))
        assert np.all(np.linalg.norm(d.atoms, axis=0) <= 1.0 + 1e-9)
        d.validate()


def test_learned_codes_solve_the_final_lasso():
    rng = np.random.default_rng(8)
    y = rng.standard_normal((10, 25))
    d, codes = learn_dictionary(y, num_atoms=6, regularizer=0.2, max_iters=20, rng=np.random.default_rng(9))
    recoded = sparse_code(d, y, 0.2)
    assert lasso_objective(d, y, codes) == pytest.approx(lasso_objective(d, y, recoded), abs=1e-6)


def test_degenerate_training_data():
    d, codes = learn_dictionary(np.zeros((8, 5)), num_atoms=4, regularizer=0.1, max_iters=5, rng=np.random.default_rng(10))
    assert np.all(codes.coefficients == 0.0)
    with pytest.raises(ParameterError):
        learn_dictionary(np.zeros((0, 0)), 4, 0.1)
    with pytest.raises(ParameterError):
        learn_dictionary(np.zeros((8, 5)), 0, 0.1)


def random_dict(rng, rows, atoms):
    a = rng.standard_normal((rows, atoms))
    return Dictionary(a / np.linalg.norm(a, axis=0))


def test_merge_single_dictionary_is_identity_up_to_labels():
    d = random_dict(np.random.default_rng(0), 16, 5)
    merged = merge_dictionaries([d], [30.0])
    np.testing.assert_array_equal(merged.atoms, d.atoms)
    np.testing.assert_array_equal(merged.block_labels, np.zeros(5, dtype=int))
    np.testing.assert_array_equal(merged.basic_directions_deg, [30.0])


def test_merge_twelve_dictionaries_of_750_atoms():
    rng = np.random.default_rng(1)
    dicts = [random_dict(rng, 8, 750) for _ in range(12)]
    merged = merge_dictionaries(dicts, np.arange(12) * 30.0)
    assert merged.atom_count == 9000
    assert merged.atoms.shape == (8, 9000)


def test_merge_labels_recover_source_dictionary():
    rng = np.random.default_rng(2)
    dicts = [random_dict(rng, 6, 4) for _ in range(3)]
    merged = merge_dictionaries(dicts, [0.0, 120.0, 240.0])
    for c in range(3):
        block = merged.atoms[:, merged.block_labels == c]
        np.testing.assert_array_equal(block, dicts[c].atoms)


def test_merge_rejects_mismatched_rows():
    rng = np.random.default_rng(3)
    with pytest.raises(ParameterError):
        merge_dictionaries([random_dict(rng, 6, 4), random_dict(rng, 8, 4)], [0.0, 180.0])
