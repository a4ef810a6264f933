"""Deterministic random substreams derived from one master seed.

Every stochastic task in the experiment harness draws from
substream(master, *labels): the labels are hashed (crc32) into a
SeedSequence spawn key, so streams are independent, reproducible across
platforms and processes, and insensitive to execution order or worker
count. Trajectory realizations for the dictionary, regression-training and
test stages get distinct 'role' labels, which is what keeps those data sets
disjoint.
"""

import zlib

import numpy as np


def _label_int(label) -> int:
    if isinstance(label, (int, np.integer)):
        return int(label) & 0xFFFFFFFF
    return zlib.crc32(str(label).encode("utf-8"))


def substream(master_seed: int, *labels) -> np.random.Generator:
    key = tuple(_label_int(lbl) for lbl in labels)
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(master_seed, spawn_key=key)))


def direction_label(direction_deg: float) -> int:
    """Stable integer label for a direction (millidegrees)."""
    return int(round(float(direction_deg) * 1000.0)) % 360_000
