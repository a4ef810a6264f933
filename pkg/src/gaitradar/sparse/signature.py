"""Energy signatures: per-basic-direction coefficient mass of a decomposition."""

from dataclasses import dataclass

import numpy as np

from gaitradar.errors import ParameterError
from gaitradar.sparse.coding import Dictionary, SparseCodes


@dataclass
class EnergySignature:
    values: np.ndarray  # (C,) nonnegative
    basic_directions_deg: np.ndarray


def energy_signature(codes: SparseCodes, dictionary: Dictionary, squared: bool = True) -> EnergySignature:
    """Sum coefficient magnitudes per dictionary block.

    squared=True (the default) sums |a|^2, so the signature entries add up
    to the squared Frobenius norm of the coefficient matrix; squared=False
    sums plain absolute values instead.
    """
    if dictionary.block_labels is None:
        raise ParameterError("dictionary has no block labels; merge dictionaries first")
    labels = np.asarray(dictionary.block_labels)
    coeffs = codes.coefficients
    if coeffs.shape[0] != labels.size:
        raise ParameterError("coefficient rows do not match dictionary labels")
    mags = coeffs**2 if squared else np.abs(coeffs)
    per_atom = mags.sum(axis=1)
    num_blocks = int(labels.max()) + 1
    values = np.zeros(num_blocks)
    np.add.at(values, labels, per_atom)
    dirs = dictionary.basic_directions_deg
    if dirs is None:
        dirs = np.arange(num_blocks, dtype=float)
    return EnergySignature(values, np.asarray(dirs, dtype=float))
