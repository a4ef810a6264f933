import numpy as np
import pytest

from activeset_oracle import active_set_lasso, lasso_objective
from gaitradar.errors import ParameterError
from gaitradar.kernels import _lasso_cy, _lasso_py
from gaitradar.sparse import Dictionary, sparse_code
from gaitradar.sparse.coding import lasso_objective as pkg_objective


def code(d, y, xi, **kw):
    return sparse_code(Dictionary(np.asarray(d, dtype=float)), y, xi, **kw)


def test_zero_data_gives_zero_codes():
    d = np.eye(4)
    out = code(d, np.zeros((4, 3)), 0.5)
    np.testing.assert_array_equal(out.coefficients, 0.0)


def test_single_atom_soft_threshold():
    rng = np.random.default_rng(0)
    atom = rng.standard_normal(6)
    atom /= np.linalg.norm(atom)
    out = code(atom[:, None], atom[:, None], 0.1)
    assert out.coefficients[0, 0] == pytest.approx(0.9, abs=1e-10)


def test_orthonormal_dictionary_soft_threshold_oracle():
    rng = np.random.default_rng(1)
    q, _ = np.linalg.qr(rng.standard_normal((8, 8)))
    y = rng.standard_normal((8, 5))
    xi = 0.3
    out = code(q, y, xi)
    proj = q.T @ y
    expected = np.sign(proj) * np.maximum(np.abs(proj) - xi, 0.0)
    np.testing.assert_allclose(out.coefficients, expected, atol=1e-9)


def test_subgradient_optimality_on_random_instances():
    rng = np.random.default_rng(2)
    for _ in range(25):
        n, j = int(rng.integers(4, 20)), int(rng.integers(2, 30))
        d = rng.standard_normal((n, j))
        d /= np.maximum(np.linalg.norm(d, axis=0), 1e-12)
        y = rng.standard_normal((n, 1))
        xi = float(rng.uniform(0.05, 0.5))
        out = code(d, y, xi)
        a = out.coefficients[:, 0]
        grad = d.T @ (d @ a - y[:, 0])
        zero = a == 0.0
        assert np.all(np.abs(grad[zero]) <= xi + 1e-6)
        nz = ~zero
        np.testing.assert_allclose(grad[nz], -xi * np.sign(a[nz]), atol=1e-6)


def test_matches_active_set_oracle_on_200_instances():
    rng = np.random.default_rng(3)
    worst = 0.0
    for _ in range(200):
        n = int(rng.integers(2, 9))
        j = int(rng.integers(1, 7))
        d = rng.standard_normal((n, j))
        d /= np.maximum(np.linalg.norm(d, axis=0), 1e-12)
        y = rng.standard_normal((n, 1))
        xi = float(rng.uniform(0.02, 0.6))
        mine = code(d, y, xi).coefficients[:, 0]
        oracle = active_set_lasso(d, y[:, 0], xi)
        gap = lasso_objective(d, y[:, 0], mine, xi) - lasso_objective(d, y[:, 0], oracle, xi)
        worst = max(worst, abs(gap))
    assert worst < 1e-6


def test_python_and_compiled_backends_agree():
    rng = np.random.default_rng(4)
    d = rng.standard_normal((16, 24))
    d /= np.linalg.norm(d, axis=0)
    y = rng.standard_normal(16)
    gram = np.ascontiguousarray(d.T @ d)
    corr = np.ascontiguousarray(d.T @ y)
    a_cy = np.zeros(24)
    a_py = np.zeros(24)
    gap_cy, _ = _lasso_cy.cd_lasso_gram(gram, corr, float(y @ y), 0.2, a_cy, 2000, 1e-10)
    gap_py, _ = _lasso_py.cd_lasso_gram(gram, corr, float(y @ y), 0.2, a_py, 2000, 1e-10)
    np.testing.assert_allclose(a_cy, a_py, atol=1e-12)
    assert gap_cy <= 1e-10 and gap_py <= 1e-10


def test_duality_gap_reported_below_tolerance():
    rng = np.random.default_rng(5)
    d = rng.standard_normal((32, 64))
    d /= np.linalg.norm(d, axis=0)
    y = rng.standard_normal((32, 7))
    out = code(d, y, 0.15)
    assert np.all(out.duality_gaps <= 1e-8)


def test_warm_start_matches_cold_start_solution():
    rng = np.random.default_rng(6)
    d = rng.standard_normal((12, 20))
    d /= np.linalg.norm(d, axis=0)
    y = rng.standard_normal((12, 4))
    cold = code(d, y, 0.2)
    warm = code(d, y, 0.2, warm_start=cold.coefficients + rng.normal(0, 0.01, size=cold.coefficients.shape))
    np.testing.assert_allclose(cold.coefficients, warm.coefficients, atol=1e-6)


def test_objective_helper_consistent():
    rng = np.random.default_rng(7)
    d = rng.standard_normal((10, 15))
    d /= np.linalg.norm(d, axis=0)
    y = rng.standard_normal((10, 2))
    out = code(d, y, 0.1)
    dd = Dictionary(d)
    assert pkg_objective(dd, y, out) == pytest.approx(
        sum(lasso_objective(d, y[:, i], out.coefficients[:, i], 0.1) for i in range(2))
    )


def test_dimension_mismatch_and_bad_regularizer():
    with pytest.raises(ParameterError):
        code(np.eye(4), np.zeros((5, 1)), 0.1)
    with pytest.raises(ParameterError):
        code(np.eye(4), np.zeros((4, 1)), 0.0)
