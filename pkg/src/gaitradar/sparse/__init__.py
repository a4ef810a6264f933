from gaitradar.sparse.coding import Dictionary, SparseCodes, lasso_objective, sparse_code
from gaitradar.sparse.frames import (
    cube_to_frame_matrix,
    frame_count,
    split_frames,
    stack_cells,
    unstack_cells,
)
from gaitradar.sparse.learn import learn_dictionary, merge_dictionaries
from gaitradar.sparse.signature import EnergySignature, energy_signature

__all__ = [
    "Dictionary",
    "SparseCodes",
    "EnergySignature",
    "cube_to_frame_matrix",
    "energy_signature",
    "frame_count",
    "lasso_objective",
    "learn_dictionary",
    "merge_dictionaries",
    "sparse_code",
    "split_frames",
    "stack_cells",
    "unstack_cells",
]
