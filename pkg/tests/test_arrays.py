import numpy as np
import pytest

from gaitradar.arrays import (
    BeamPattern,
    SphericalPoint,
    UraGeometry,
    beam_pattern,
    default_scan_grid,
    first_null_extent,
    half_power_beamwidth,
    steering,
    worst_lobe_db,
)
from gaitradar.errors import AnalysisError, ParameterError
from gaitradar.scenes import RX_FULL, SINGLE, TX_MIMO

BORESIGHT = SphericalPoint(100.0, 0.0, 0.0)


def test_boresight_steering_is_all_ones():
    v = steering(TX_MIMO, BORESIGHT)
    assert v.shape == (4,)
    np.testing.assert_allclose(v, np.ones(4), atol=1e-15)


def test_steering_phases_match_direct_formula():
    # 4x1 horizontal, 12-wavelength spacing, beta = 0.39 deg
    v = steering(TX_MIMO, SphericalPoint(100.0, 0.39, 0.0))
    phases = np.angle(v) / (2 * np.pi)
    expected = np.sin(np.radians(0.39)) * 12.0 * (np.arange(4) - 1.5)
    np.testing.assert_allclose(phases, expected, atol=1e-12)
    np.testing.assert_allclose(expected, [-0.1225, -0.0408, 0.0408, 0.1225], atol=2e-4)


def test_steering_element_indexing_and_modulus():
    geom = UraGeometry(rows_z=3, cols_y=4, spacing_y=36.0, spacing_z=32.0)
    v = steering(geom, SphericalPoint(50.0, 1.0, -0.5))
    assert v.shape == (12,)
    np.testing.assert_allclose(np.abs(v), 1.0, atol=1e-12)
    # element k = i_z * L_y + i_y: one step in i_y advances the azimuth phase
    expected = 2 * np.pi * np.sin(np.radians(1.0)) * np.cos(np.radians(-0.5)) * 36.0
    np.testing.assert_allclose(v[1] / v[0], np.exp(1j * expected), atol=1e-12)
    # one step in i_z (k jumps by L_y) advances the elevation phase
    expected_z = 2 * np.pi * np.sin(np.radians(-0.5)) * 32.0
    np.testing.assert_allclose(v[4] / v[0], np.exp(1j * expected_z), atol=1e-12)


def test_steering_conjugate_symmetry():
    geom = RX_FULL
    a = steering(geom, SphericalPoint(10.0, 2.0, 0.7))
    b = steering(geom, SphericalPoint(10.0, -2.0, -0.7))
    np.testing.assert_allclose(b, a.conj(), atol=1e-12)


def test_steering_rejects_out_of_range_angles():
    with pytest.raises(ParameterError):
        steering(TX_MIMO, SphericalPoint(10.0, 95.0, 0.0))


def test_single_element_pattern_is_flat():
    az, el = np.linspace(-4, 4, 41), np.linspace(-1, 1, 11)
    bp = beam_pattern(SINGLE, SINGLE, BORESIGHT, az, el)
    np.testing.assert_allclose(bp.gain_db, 0.0, atol=1e-12)


@pytest.fixture(scope="module")
def mimo_pattern():
    az, el = default_scan_grid()
    return beam_pattern(TX_MIMO, RX_FULL, BORESIGHT, az, el)


def test_mimo_half_power_beamwidths(mimo_pattern):
    assert half_power_beamwidth(mimo_pattern, "azimuth") == pytest.approx(0.39, abs=0.05)
    assert half_power_beamwidth(mimo_pattern, "elevation") == pytest.approx(0.6, abs=0.05)


def test_simo_has_grating_lobes_mimo_does_not(mimo_pattern):
    az, el = default_scan_grid()
    simo = beam_pattern(SINGLE, RX_FULL, BORESIGHT, az, el)
    simo_worst = worst_lobe_db(simo, first_null_extent(simo, "azimuth"), first_null_extent(simo, "elevation"))
    assert simo_worst >= -3.0
    mimo_worst = worst_lobe_db(
        mimo_pattern,
        first_null_extent(mimo_pattern, "azimuth"),
        first_null_extent(mimo_pattern, "elevation"),
    )
    assert mimo_worst < -6.0


def test_virtual_array_factorization():
    az = np.linspace(-2, 2, 81)
    el = np.linspace(-1, 1, 21)
    full = beam_pattern(TX_MIMO, RX_FULL, BORESIGHT, az, el)
    tx_only = beam_pattern(TX_MIMO, SINGLE, BORESIGHT, az, el)
    rx_only = beam_pattern(SINGLE, RX_FULL, BORESIGHT, az, el)
    lin = lambda bp: 10.0 ** (bp.gain_db / 10.0)
    np.testing.assert_allclose(lin(full), lin(tx_only) * lin(rx_only), rtol=1e-9, atol=1e-12)


def test_pattern_symmetry_at_boresight(mimo_pattern):
    g = mimo_pattern.gain_db
    np.testing.assert_allclose(g, g[::-1, ::-1], atol=1e-9)


def test_beamwidth_invariant_under_uniform_scaling(mimo_pattern):
    shifted = BeamPattern(
        mimo_pattern.azimuth_deg,
        mimo_pattern.elevation_deg,
        mimo_pattern.gain_db + 7.0,
        0.0,
        0.0,
    )
    assert half_power_beamwidth(shifted, "azimuth") == pytest.approx(
        half_power_beamwidth(mimo_pattern, "azimuth"), abs=1e-12
    )


def test_unbracketed_crossing_raises():
    az = np.linspace(-0.05, 0.05, 11)  # narrower than the mainlobe
    el = np.linspace(-0.05, 0.05, 11)
    bp = beam_pattern(TX_MIMO, RX_FULL, BORESIGHT, az, el)
    with pytest.raises(AnalysisError):
        half_power_beamwidth(bp, "azimuth")


def test_empty_scan_grid_rejected():
    with pytest.raises(ParameterError):
        beam_pattern(TX_MIMO, RX_FULL, BORESIGHT, np.array([]), np.array([0.0]))
