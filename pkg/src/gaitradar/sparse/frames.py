"""Frame splitting and real-valued stacking of per-cell slow-time signals."""

import numpy as np

from gaitradar.errors import ParameterError


def split_frames(x, frame_len: int, overlap_fraction: float = 0.5) -> np.ndarray:
    """Split a slow-time vector into overlapping frames (columns).

    The signal is first truncated to a whole number of frame_len blocks, so
    for 50% overlap the column count is exactly 2*floor(X/K) - 1 for any X.
    """
    x = np.asarray(x)
    k = int(frame_len)
    if x.ndim != 1:
        raise ParameterError("expected a 1-D slow-time signal")
    if x.size < k:
        raise ParameterError("signal shorter than one frame")
    starts = _frame_starts(x.size, k, overlap_fraction)
    return np.stack([x[s : s + k] for s in starts], axis=1)


def _frame_starts(num_samples, frame_len, overlap_fraction):
    if not 0.0 <= overlap_fraction < 1.0:
        raise ParameterError("overlap fraction must be in [0, 1)")
    stride = max(frame_len * (1.0 - overlap_fraction), 1.0)  # fractional for odd K
    usable = (num_samples // frame_len) * frame_len
    count = int((usable - frame_len) / stride + 1e-9) + 1
    return [int(i * stride) for i in range(count)]


def frame_count(num_samples: int, frame_len: int, overlap_fraction: float = 0.5) -> int:
    if num_samples < frame_len:
        raise ParameterError("signal shorter than one frame")
    return len(_frame_starts(num_samples, frame_len, overlap_fraction))


def stack_cells(per_cell_frames) -> np.ndarray:
    """Stack complex per-cell frame matrices into one real matrix.

    Row blocks are ordered (Re cell 1, Im cell 1, Re cell 2, ...), giving
    2*K*N rows; all cells must share the frame size and frame count.
    """
    mats = [np.asarray(m) for m in per_cell_frames]
    if not mats:
        raise ParameterError("need at least one cell")
    shape = mats[0].shape
    if any(m.shape != shape for m in mats):
        raise ParameterError("mismatched frame-matrix shapes across cells")
    blocks = []
    for m in mats:
        blocks.append(np.real(m))
        blocks.append(np.imag(m))
    return np.vstack(blocks)


def unstack_cells(stacked, num_cells: int):
    """Inverse of stack_cells: recover the complex per-cell frame matrices."""
    rows = stacked.shape[0]
    if rows % (2 * num_cells) != 0:
        raise ParameterError("row count is not divisible by 2*N")
    k = rows // (2 * num_cells)
    out = []
    for i in range(num_cells):
        re = stacked[2 * i * k : (2 * i + 1) * k]
        im = stacked[(2 * i + 1) * k : (2 * i + 2) * k]
        out.append(re + 1j * im)
    return out


def cube_to_frame_matrix(cube_data, frame_len: int, overlap_fraction: float = 0.5) -> np.ndarray:
    """Split every cell of an (N, X) cube and stack to the 2KN x U matrix."""
    return stack_cells([split_frames(row, frame_len, overlap_fraction) for row in np.asarray(cube_data)])
