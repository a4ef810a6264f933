"""The five radar configurations compared in the experiments.

All share a 24 GHz carrier, 1 ms PRI and 32-pulse CPIs; they differ in the
antenna arrays, waveform and which resolution cells exist:

  cw_1          single element, continuous wave       -> 1 cell
  range_2       single element, 250 MHz LFM           -> 2 range cells
  horizontal_4  4x1 tx (12 lam), 4x1 rx (36 lam)      -> 4 cells, range x azimuth
  vertical_4    4x1 tx (12 lam), 1x3 rx (32 lam)      -> 4 cells, range x elevation
  full3d_8      4x1 tx (12 lam), 4x3 rx (36/32 lam)   -> 8 cells
"""

from gaitradar.arrays import UraGeometry
from gaitradar.echo import CwWaveform, LfmWaveform, RadarScene, RadarTiming
from gaitradar.errors import ParameterError
from gaitradar.grid import build_grid

CARRIER_HZ = 24e9
PRI_S = 1e-3
PULSES_PER_CPI = 32
LFM_BANDWIDTH_HZ = 250e6
LFM_PULSE_LEN_S = 1e-6
CELL_EXTENTS = (0.6, 0.39, 0.6)  # dr m, daz deg, del deg

TX_MIMO = UraGeometry(rows_z=1, cols_y=4, spacing_y=12.0, spacing_z=1.0)
RX_FULL = UraGeometry(rows_z=3, cols_y=4, spacing_y=36.0, spacing_z=32.0)
RX_HORIZONTAL = UraGeometry(rows_z=1, cols_y=4, spacing_y=36.0, spacing_z=1.0)
RX_VERTICAL = UraGeometry(rows_z=3, cols_y=1, spacing_y=1.0, spacing_z=32.0)
SINGLE = UraGeometry(rows_z=1, cols_y=1, spacing_y=1.0, spacing_z=1.0)

CONFIG_TAGS = ("cw_1", "range_2", "horizontal_4", "vertical_4", "full3d_8")


def build_scene(config_tag: str, total_pulses: int) -> RadarScene:
    timing = RadarTiming(CARRIER_HZ, PRI_S, PULSES_PER_CPI, total_pulses)
    lfm = LfmWaveform(LFM_BANDWIDTH_HZ, LFM_PULSE_LEN_S)
    if config_tag == "cw_1":
        return RadarScene(SINGLE, SINGLE, CwWaveform(), timing, build_grid("single_1", CELL_EXTENTS))
    if config_tag == "range_2":
        return RadarScene(SINGLE, SINGLE, lfm, timing, build_grid("range_2", CELL_EXTENTS))
    if config_tag == "horizontal_4":
        return RadarScene(TX_MIMO, RX_HORIZONTAL, lfm, timing, build_grid("horizontal_4", CELL_EXTENTS))
    if config_tag == "vertical_4":
        return RadarScene(TX_MIMO, RX_VERTICAL, lfm, timing, build_grid("vertical_4", CELL_EXTENTS))
    if config_tag == "full3d_8":
        return RadarScene(TX_MIMO, RX_FULL, lfm, timing, build_grid("full3d_8", CELL_EXTENTS))
    raise ParameterError(f"unknown radar configuration {config_tag!r}")
