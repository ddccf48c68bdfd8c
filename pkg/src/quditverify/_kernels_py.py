"""Numpy implementations of the residue-condition kernels.

Used whenever the compiled extension is unavailable.  Semantics match
``_kernels.pyx`` exactly.
"""

from __future__ import annotations

import numpy as np


def _outcome_grid(dims: np.ndarray) -> np.ndarray:
    """All outcome tuples as a ``(n, D)`` integer array in big-endian order."""
    grids = np.indices(tuple(int(d) for d in dims), dtype=np.int64)
    return grids.reshape(len(dims), -1)


def residue_table(weights: np.ndarray, dims: np.ndarray, modulus: int) -> np.ndarray:
    weights = np.asarray(weights, dtype=np.int64)
    outcomes = _outcome_grid(np.asarray(dims))
    return (weights @ outcomes) % modulus == 0


def count_table(weights: np.ndarray, offsets: np.ndarray, dims: np.ndarray, modulus: int) -> np.ndarray:
    offsets = np.asarray(offsets, dtype=np.int64)
    table = residue_table(weights, dims, modulus).astype(np.int64)
    counts = np.zeros((len(offsets) - 1, table.shape[1]), dtype=np.int64)
    for i, (start, stop) in enumerate(zip(offsets[:-1], offsets[1:])):
        counts[i] = table[start:stop].sum(axis=0)
    return counts
