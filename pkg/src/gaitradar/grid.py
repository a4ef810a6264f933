"""Target-centered spatial grids of resolution cells.

A grid is a small set of (range, azimuth, elevation) offsets around the
target's geometric center; each offset is the center of one resolution cell
that the beamformer bank is matched to. The five layouts mirror the radar
configurations compared in the experiments: a full 2x2x2 grid, horizontal
and vertical 4-cell planes, a 2-cell range-only split, and a single cell.
"""

from dataclasses import dataclass

import numpy as np

from gaitradar.errors import ParameterError

LAYOUTS = ("full3d_8", "horizontal_4", "vertical_4", "range_2", "single_1")


@dataclass(frozen=True)
class SpatialGrid:
    """Cell-center offsets (relative to the grid center) and cell extents."""

    layout_tag: str
    # offsets as rows of (delta_range_m, delta_azimuth_deg, delta_elevation_deg)
    offsets: np.ndarray
    extent_range_m: float
    extent_azimuth_deg: float
    extent_elevation_deg: float

    @property
    def num_cells(self) -> int:
        return self.offsets.shape[0]

    def to_dict(self) -> dict:
        return {
            "layout_tag": self.layout_tag,
            "extent_range_m": self.extent_range_m,
            "extent_azimuth_deg": self.extent_azimuth_deg,
            "extent_elevation_deg": self.extent_elevation_deg,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SpatialGrid":
        return build_grid(
            d["layout_tag"],
            (d["extent_range_m"], d["extent_azimuth_deg"], d["extent_elevation_deg"]),
        )


def build_grid(layout_tag: str, extents) -> SpatialGrid:
    """Build one of the five cell layouts from (dr_m, daz_deg, del_deg) extents."""
    dr, daz, del_ = (float(v) for v in extents)
    if dr <= 0 or daz <= 0 or del_ <= 0:
        raise ParameterError("grid extents must be positive")
    if layout_tag == "full3d_8":
        axes = ([-dr, dr], [-daz, daz], [-del_, del_])
    elif layout_tag == "horizontal_4":
        axes = ([-dr, dr], [-daz, daz], [0.0])
    elif layout_tag == "vertical_4":
        axes = ([-dr, dr], [0.0], [-del_, del_])
    elif layout_tag == "range_2":
        axes = ([-dr, dr], [0.0], [0.0])
    elif layout_tag == "single_1":
        axes = ([0.0], [0.0], [0.0])
    else:
        raise ParameterError(f"unknown grid layout {layout_tag!r}")
    offsets = np.array([(r, a, e) for r in axes[0] for a in axes[1] for e in axes[2]])
    return SpatialGrid(layout_tag, offsets, dr, daz, del_)


def cell_size_cartesian(extents, range_m: float) -> np.ndarray:
    """Cell size in meters at a given range, arc-length angular conversion."""
    if range_m <= 0:
        raise ParameterError("range must be positive")
    dr, daz, del_ = (float(v) for v in extents)
    return np.array([dr, range_m * np.radians(daz), range_m * np.radians(del_)])
