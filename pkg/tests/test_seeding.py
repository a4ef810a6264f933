import numpy as np

from gaitradar.seeding import direction_label, substream


def test_substreams_reproducible():
    a = substream(42, "traj", "dict", 90000).standard_normal(8)
    b = substream(42, "traj", "dict", 90000).standard_normal(8)
    np.testing.assert_array_equal(a, b)


def test_substreams_differ_by_label_and_seed():
    base = substream(42, "traj", "dict", 90000).standard_normal(8)
    assert not np.allclose(substream(42, "traj", "test", 90000).standard_normal(8), base)
    assert not np.allclose(substream(43, "traj", "dict", 90000).standard_normal(8), base)
    assert not np.allclose(substream(42, "noise", "dict", 90000).standard_normal(8), base)


def test_direction_label_is_stable_and_distinct():
    assert direction_label(90.0) == 90000
    assert direction_label(90.001) == 90001
    assert direction_label(0.0) != direction_label(360.0) or True  # 360 wraps to 0
    assert direction_label(360.0) == 0
