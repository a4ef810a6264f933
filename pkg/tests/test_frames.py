import numpy as np
import pytest

from gaitradar.errors import ParameterError
from gaitradar.sparse import cube_to_frame_matrix, frame_count, split_frames, stack_cells, unstack_cells


def test_frame_count_matches_table_formula():
    assert frame_count(60_000, 32) == 2 * (60_000 // 32) - 1 == 3749
    assert split_frames(np.arange(60_000), 32).shape == (32, 3749)


def test_three_frames_at_fifty_percent_overlap():
    x = np.arange(64)
    y = split_frames(x, 32)
    assert y.shape == (32, 3)
    np.testing.assert_array_equal(y[:, 0], x[0:32])
    np.testing.assert_array_equal(y[:, 1], x[16:48])
    np.testing.assert_array_equal(y[:, 2], x[32:64])


def test_single_frame_equals_input():
    x = np.arange(32) + 1j * np.arange(32)
    y = split_frames(x, 32)
    assert y.shape == (32, 1)
    np.testing.assert_array_equal(y[:, 0], x)


def test_count_formula_holds_for_random_sizes():
    rng = np.random.default_rng(0)
    for _ in range(100):
        k = int(rng.integers(2, 128))
        x = int(rng.integers(k, 20 * k))
        got = split_frames(np.zeros(x), k).shape[1]
        assert got == 2 * (x // k) - 1


def test_nonstandard_overlap():
    y = split_frames(np.arange(96), 32, overlap_fraction=0.0)
    assert y.shape == (32, 3)
    with pytest.raises(ParameterError):
        split_frames(np.arange(96), 32, overlap_fraction=1.0)


def test_signal_shorter_than_frame_rejected():
    with pytest.raises(ParameterError):
        split_frames(np.arange(16), 32)


def test_stack_real_input_bottom_rows_zero():
    frames = split_frames(np.arange(64, dtype=float) + 0j, 32)
    stacked = stack_cells([frames])
    assert stacked.shape == (64, 3)
    np.testing.assert_array_equal(stacked[32:], 0.0)


def test_stack_hand_verified():
    a = np.array([[1 + 2j], [3 + 4j]])
    b = np.array([[5 - 1j], [-2 + 0.5j]])
    stacked = stack_cells([a, b])
    np.testing.assert_allclose(stacked[:, 0], [1, 3, 2, 4, 5, -2, -1, 0.5])
    assert stacked.shape == (8, 1)


def test_stack_roundtrip():
    rng = np.random.default_rng(1)
    cells = [rng.standard_normal((8, 5)) + 1j * rng.standard_normal((8, 5)) for _ in range(3)]
    rec = unstack_cells(stack_cells(cells), 3)
    for got, want in zip(rec, cells):
        np.testing.assert_allclose(got, want)


def test_mismatched_cells_rejected():
    with pytest.raises(ParameterError):
        stack_cells([np.zeros((4, 3)), np.zeros((4, 2))])


def test_cube_to_frame_matrix_shape():
    cube = np.zeros((8, 1000), dtype=complex)
    y = cube_to_frame_matrix(cube, 32)
    assert y.shape == (2 * 32 * 8, 2 * (1000 // 32) - 1)
