"""Residue-condition kernels with a compiled backend when available.

``BACKEND`` names the implementation chosen at import time.  Set the
environment variable ``QUDITVERIFY_PURE_PYTHON=1`` to force the numpy
fallback.
"""

from __future__ import annotations

import os
from typing import Sequence

import numpy as np

from . import _kernels_py
from .qarith import HybridDims, as_dims, lcm_of, residue_weights

if os.environ.get("QUDITVERIFY_PURE_PYTHON"):
    _impl = _kernels_py
    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]

        BACKEND = "cython"
    except ImportError:
        _impl = _kernels_py
        BACKEND = "python"


def _weight_matrix(tuples: Sequence[Sequence[int]], dims: HybridDims) -> np.ndarray:
    if not tuples:
        return np.zeros((0, dims.n), dtype=np.int64)
    return np.array([residue_weights(h, dims)[0] for h in tuples], dtype=np.int64).reshape(len(tuples), dims.n)


def residue_table(
    tuples: Sequence[Sequence[int]], dims: HybridDims | Sequence[int], backend=None
) -> np.ndarray:
    """Boolean matrix ``T[r, j]``: does exponent tuple ``r`` satisfy the condition with outcome ``j``.

    Outcomes are indexed by their big-endian global index.
    """
    dims = as_dims(dims)
    impl = backend or _impl
    dims_arr = np.array(dims.dims, dtype=np.int64)
    return np.asarray(impl.residue_table(_weight_matrix(tuples, dims), dims_arr, lcm_of(dims)), dtype=bool)


def count_table(
    subsets: Sequence[Sequence[Sequence[int]]], dims: HybridDims | Sequence[int], backend=None
) -> np.ndarray:
    """Integer matrix ``C[i, j]`` counting members of ``subsets[i]`` that satisfy the condition with ``j``."""
    dims = as_dims(dims)
    impl = backend or _impl
    flat = [h for subset in subsets for h in subset]
    offsets = np.cumsum([0] + [len(s) for s in subsets]).astype(np.int64)
    dims_arr = np.array(dims.dims, dtype=np.int64)
    return np.asarray(impl.count_table(_weight_matrix(flat, dims), offsets, dims_arr, lcm_of(dims)), dtype=np.int64)
