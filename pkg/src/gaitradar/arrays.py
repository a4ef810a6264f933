"""Uniform rectangular arrays: steering vectors, MIMO beam patterns, beamwidths.

Conventions: angles are degrees at the API boundary and radians internally.
Element spacings are expressed in carrier wavelengths, so none of the math
here needs the absolute frequency. Element k of an L_y x L_z URA sits at
(i_y, i_z) with k = i_z * L_y + i_y, zero-based, and phase centers are
symmetric about the array middle.
"""

from dataclasses import dataclass

import numpy as np

from gaitradar.errors import AnalysisError, ParameterError


@dataclass(frozen=True)
class UraGeometry:
    """Uniform rectangular array: element counts and spacings in wavelengths."""

    rows_z: int
    cols_y: int
    spacing_y: float
    spacing_z: float

    def __post_init__(self):
        if self.rows_z < 1 or self.cols_y < 1:
            raise ParameterError("element counts must be >= 1")
        if self.spacing_y <= 0 or self.spacing_z <= 0:
            raise ParameterError("spacings must be positive")

    @property
    def num_elements(self) -> int:
        return self.rows_z * self.cols_y


@dataclass(frozen=True)
class SphericalPoint:
    """Range/azimuth/elevation triple, angles in degrees."""

    range_m: float
    azimuth_deg: float
    elevation_deg: float

    def __post_init__(self):
        if self.range_m <= 0:
            raise ParameterError("range must be positive")


def steering_phases_cycles(geom: UraGeometry, azimuth_deg, elevation_deg):
    """Per-element phases in cycles for plane-wave arrival from (az, el).

    Accepts scalar or array angles; the trailing output axis is the element
    index k = i_z * cols_y + i_y.
    """
    az = np.radians(np.asarray(azimuth_deg, dtype=float))
    el = np.radians(np.asarray(elevation_deg, dtype=float))
    if np.any(np.abs(az) >= np.pi / 2) or np.any(np.abs(el) >= np.pi / 2):
        raise ParameterError("azimuth and elevation must lie strictly inside +-90 deg")
    iy = np.arange(geom.cols_y) - (geom.cols_y - 1) / 2.0
    iz = np.arange(geom.rows_z) - (geom.rows_z - 1) / 2.0
    # (..., L_z, L_y) then flattened so k = i_z*L_y + i_y
    ph = (
        np.sin(az)[..., None, None] * np.cos(el)[..., None, None] * geom.spacing_y * iy[None, :]
        + np.sin(el)[..., None, None] * geom.spacing_z * iz[:, None]
    )
    return ph.reshape(ph.shape[:-2] + (geom.num_elements,))


def steering(geom: UraGeometry, point: SphericalPoint) -> np.ndarray:
    """Unit-modulus steering vector of length rows_z * cols_y (far field)."""
    ph = steering_phases_cycles(geom, point.azimuth_deg, point.elevation_deg)
    return np.exp(2j * np.pi * ph)


@dataclass
class BeamPattern:
    """Two-way gain map over a rectangular (azimuth, elevation) scan grid."""

    azimuth_deg: np.ndarray
    elevation_deg: np.ndarray
    gain_db: np.ndarray  # shape (n_el, n_az)
    steer_azimuth_deg: float
    steer_elevation_deg: float


def beam_pattern(
    tx: UraGeometry,
    rx: UraGeometry,
    steer_to: SphericalPoint,
    scan_azimuth_deg,
    scan_elevation_deg,
) -> BeamPattern:
    """Virtual-array (tx (x) rx) power pattern, normalized to 0 dB at steer_to.

    gain(az, el) = |<a_s (x) b_s, a (x) b>|^2 / (M_t M_r)^2, which factors into
    the product of the tx-only and rx-only correlations.
    """
    scan_az = np.atleast_1d(np.asarray(scan_azimuth_deg, dtype=float))
    scan_el = np.atleast_1d(np.asarray(scan_elevation_deg, dtype=float))
    if scan_az.size == 0 or scan_el.size == 0:
        raise ParameterError("scan grid must be nonempty")

    az_grid, el_grid = np.meshgrid(scan_az, scan_el)  # (n_el, n_az)
    gain = np.ones_like(az_grid)
    for geom in (tx, rx):
        v_steer = steering(geom, SphericalPoint(steer_to.range_m, steer_to.azimuth_deg, steer_to.elevation_deg))
        ph = steering_phases_cycles(geom, az_grid, el_grid)
        corr = np.exp(2j * np.pi * ph) @ v_steer.conj()
        gain = gain * (np.abs(corr) / geom.num_elements) ** 2

    with np.errstate(divide="ignore"):
        gain_db = 10.0 * np.log10(gain)
    return BeamPattern(scan_az, scan_el, gain_db, steer_to.azimuth_deg, steer_to.elevation_deg)


def default_scan_grid(az_limit_deg=4.0, el_limit_deg=1.0, step_deg=0.01):
    """Field-of-view scan grid; 0.01 deg resolves the sub-degree mainlobes."""
    n_az = int(round(2 * az_limit_deg / step_deg)) + 1
    n_el = int(round(2 * el_limit_deg / step_deg)) + 1
    return np.linspace(-az_limit_deg, az_limit_deg, n_az), np.linspace(-el_limit_deg, el_limit_deg, n_el)


def _cut_through_peak(pattern: BeamPattern, axis: str):
    i_el = int(np.argmin(np.abs(pattern.elevation_deg - pattern.steer_elevation_deg)))
    i_az = int(np.argmin(np.abs(pattern.azimuth_deg - pattern.steer_azimuth_deg)))
    if axis == "azimuth":
        return pattern.azimuth_deg, pattern.gain_db[i_el, :], i_az
    if axis == "elevation":
        return pattern.elevation_deg, pattern.gain_db[:, i_az], i_el
    raise ParameterError(f"unknown axis {axis!r}")


def half_power_beamwidth(pattern: BeamPattern, axis: str) -> float:
    """-3 dB width of the mainlobe along one axis, linearly interpolated."""
    angles, cut, i_peak = _cut_through_peak(pattern, axis)
    level = cut[i_peak] - 3.0102999566398120  # half power below the peak

    def cross(direction):
        i = i_peak
        while 0 <= i + direction < len(cut):
            j = i + direction
            if cut[j] <= level:
                # linear interpolation between samples i and j
                frac = (cut[i] - level) / (cut[i] - cut[j])
                return angles[i] + frac * (angles[j] - angles[i])
            i = j
        raise AnalysisError(f"-3 dB crossing not bracketed by the scan grid ({axis})")

    return float(cross(+1) - cross(-1))


def first_null_extent(pattern: BeamPattern, axis: str) -> float:
    """Distance from the peak to the first local minimum of the cut (degrees)."""
    angles, cut, i_peak = _cut_through_peak(pattern, axis)
    for i in range(i_peak + 1, len(cut) - 1):
        if cut[i] <= cut[i - 1] and cut[i] <= cut[i + 1]:
            return float(angles[i] - angles[i_peak])
    raise AnalysisError(f"no null found along {axis} inside the scan grid")


def worst_lobe_db(pattern: BeamPattern, exclude_az_deg: float, exclude_el_deg: float) -> float:
    """Highest gain outside the mainlobe box |az| <= ea, |el| <= eb (dB)."""
    az_off = np.abs(pattern.azimuth_deg - pattern.steer_azimuth_deg)
    el_off = np.abs(pattern.elevation_deg - pattern.steer_elevation_deg)
    outside = (el_off[:, None] > exclude_el_deg) | (az_off[None, :] > exclude_az_deg)
    if not np.any(outside):
        raise AnalysisError("mainlobe exclusion box covers the whole scan grid")
    return float(np.max(pattern.gain_db[outside]))
