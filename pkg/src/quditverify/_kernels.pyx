# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled residue-condition kernels.

Both routines walk the outcome tuples ``j`` in big-endian order with an
odometer and keep ``sum_k w_k j_k mod L`` up to date incrementally, using
only additions and conditional subtractions in the inner loop.
"""

import numpy as np
cimport numpy as cnp

cnp.import_array()


cdef inline void _walk(const cnp.int64_t[:] weights, const cnp.int64_t[:] dims,
                       cnp.int64_t modulus, cnp.int64_t total,
                       cnp.int64_t[:] digits, cnp.int64_t[:] steps, cnp.int64_t[:] unwind,
                       cnp.int64_t[:] out) noexcept nogil:
    # out[index] += 1 wherever the running residue is zero
    cdef Py_ssize_t n = dims.shape[0]
    cdef Py_ssize_t k
    cdef cnp.int64_t index, acc = 0
    for k in range(n):
        digits[k] = 0
        steps[k] = weights[k] % modulus
        # reverting a full cycle of digit k removes (d_k - 1) steps
        unwind[k] = (steps[k] * (dims[k] - 1)) % modulus
    for index in range(total):
        if acc == 0:
            out[index] += 1
        k = n - 1
        while k >= 0:
            if digits[k] + 1 < dims[k]:
                digits[k] += 1
                acc += steps[k]
                if acc >= modulus:
                    acc -= modulus
                break
            digits[k] = 0
            acc -= unwind[k]
            if acc < 0:
                acc += modulus
            k -= 1


def residue_table(const cnp.int64_t[:, :] weights, const cnp.int64_t[:] dims, cnp.int64_t modulus):
    """Boolean table ``T[r, j] = (sum_k weights[r, k] * j_k) % modulus == 0``."""
    cdef Py_ssize_t rows = weights.shape[0]
    cdef Py_ssize_t n = dims.shape[0]
    cdef Py_ssize_t r, k
    cdef cnp.int64_t total = 1
    for k in range(n):
        total *= dims[k]
    out = np.zeros((rows, total), dtype=np.int64)
    cdef cnp.int64_t[:, :] view = out
    cdef cnp.int64_t[:] digits = np.zeros(n, dtype=np.int64)
    cdef cnp.int64_t[:] steps = np.zeros(n, dtype=np.int64)
    cdef cnp.int64_t[:] unwind = np.zeros(n, dtype=np.int64)
    with nogil:
        for r in range(rows):
            _walk(weights[r], dims, modulus, total, digits, steps, unwind, view[r])
    return out.astype(np.bool_)


def count_table(const cnp.int64_t[:, :] weights, const cnp.int64_t[:] offsets,
                const cnp.int64_t[:] dims, cnp.int64_t modulus):
    """``C[i, j]`` = number of rows in block ``offsets[i]:offsets[i+1]`` satisfying the condition."""
    cdef Py_ssize_t blocks = offsets.shape[0] - 1
    cdef Py_ssize_t n = dims.shape[0]
    cdef Py_ssize_t i, r, k
    cdef cnp.int64_t total = 1
    for k in range(n):
        total *= dims[k]
    out = np.zeros((blocks, total), dtype=np.int64)
    cdef cnp.int64_t[:, :] counts = out
    cdef cnp.int64_t[:] digits = np.zeros(n, dtype=np.int64)
    cdef cnp.int64_t[:] steps = np.zeros(n, dtype=np.int64)
    cdef cnp.int64_t[:] unwind = np.zeros(n, dtype=np.int64)
    with nogil:
        for i in range(blocks):
            for r in range(offsets[i], offsets[i + 1]):
                _walk(weights[r], dims, modulus, total, digits, steps, unwind, counts[i])
    return out
