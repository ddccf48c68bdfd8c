"""Dense complex linear algebra on numpy arrays.

Matrices are plain ``complex128`` ndarrays.  Vectors use the big-endian
mixed-radix convention: particle 0 is the most significant digit.
"""

from __future__ import annotations

import csv
import io
import math
from functools import reduce
from typing import Iterable, Sequence

import numpy as np

from .errors import CapacityError, DomainError, InvalidArgumentError
from .qarith import HybridDims, as_dims, dimension_cap, tuple_to_index

CONSTRUCTION_TOL = 1e-10
SPECTRAL_TOL = 1e-8
HERMITIAN_TOL = 1e-9


def as_matrix(a) -> np.ndarray:
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2:
        raise InvalidArgumentError(f"expected a 2-D matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise InvalidArgumentError("matrix has non-finite entries")
    return m


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    a, b = np.asarray(a), np.asarray(b)
    if a.shape[0] * b.shape[0] > dimension_cap() or a.shape[1] * b.shape[1] > dimension_cap():
        raise CapacityError(f"kron of {a.shape} and {b.shape} exceeds cap {dimension_cap()}")
    return np.kron(a, b)


def kron_all(factors: Iterable[np.ndarray]) -> np.ndarray:
    return reduce(kron, factors)


def dagger(a: np.ndarray) -> np.ndarray:
    return np.conj(np.asarray(a)).T


def max_abs(a: np.ndarray) -> float:
    return float(np.max(np.abs(a))) if np.size(a) else 0.0


def is_hermitian(a: np.ndarray, tol: float = HERMITIAN_TOL) -> bool:
    a = np.asarray(a)
    return a.shape[0] == a.shape[1] and max_abs(a - dagger(a)) <= tol


def is_unitary(a: np.ndarray, tol: float = CONSTRUCTION_TOL) -> bool:
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        return False
    return max_abs(dagger(a) @ a - np.eye(a.shape[0])) <= tol


def is_projector(a: np.ndarray, tol: float = CONSTRUCTION_TOL) -> bool:
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        return False
    return is_hermitian(a, tol) and max_abs(a @ a - a) <= tol


def hermitian_spectrum(a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues in descending order and the matching orthonormal eigenvectors (columns)."""
    a = as_matrix(a)
    if a.shape[0] != a.shape[1]:
        raise DomainError(f"spectrum needs a square matrix, got {a.shape}")
    if not is_hermitian(a):
        raise DomainError(f"matrix is not Hermitian (max deviation {max_abs(a - dagger(a)):.3g})")
    values, vectors = np.linalg.eigh((a + dagger(a)) / 2)
    order = np.argsort(values)[::-1]
    return values[order], vectors[:, order]


def basis_vector(label: Sequence[int], dims: HybridDims | Sequence[int]) -> np.ndarray:
    dims = as_dims(dims)
    v = np.zeros(dims.total, dtype=np.complex128)
    v[tuple_to_index(label, dims)] = 1.0
    return v


def outer(u: np.ndarray, v: np.ndarray | None = None) -> np.ndarray:
    v = u if v is None else v
    return np.outer(u, np.conj(v))


def format_complex(z: complex) -> str:
    """Lossless ``re+imj`` text that ``complex()`` parses back exactly."""
    z = complex(z)
    sign = "-" if math.copysign(1.0, z.imag) < 0 else "+"
    return f"{z.real!r}{sign}{abs(z.imag)!r}j"


def parse_complex(text: str) -> complex:
    return complex(text.strip())


def matrix_to_csv(a: np.ndarray) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    for row in np.atleast_2d(a):
        writer.writerow(format_complex(z) for z in row)
    return buffer.getvalue()


def matrix_from_csv(text: str) -> np.ndarray:
    rows = [[parse_complex(cell) for cell in row] for row in csv.reader(io.StringIO(text)) if row]
    if len({len(r) for r in rows}) > 1:
        raise InvalidArgumentError("ragged matrix CSV")
    return np.array(rows, dtype=np.complex128)
