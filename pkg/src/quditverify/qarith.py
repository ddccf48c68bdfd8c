"""Exact integer arithmetic on exponent and outcome tuples.

Every divisibility test here works on integers after rescaling by the
lcm of the local dimensions, so no floating point ever decides whether
``sum_k h_k * j_k / d_k`` is an integer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from .errors import CapacityError, InvalidArgumentError

#: Largest total Hilbert-space dimension accepted by default.
DEFAULT_DIMENSION_CAP = 4096

_dimension_cap = DEFAULT_DIMENSION_CAP


def dimension_cap() -> int:
    return _dimension_cap


def set_dimension_cap(cap: int) -> int:
    """Change the global dimension cap and return the previous value."""
    global _dimension_cap
    if cap < 1:
        raise InvalidArgumentError(f"dimension cap must be positive, got {cap}")
    previous, _dimension_cap = _dimension_cap, int(cap)
    return previous


def factorize(n: int) -> list[tuple[int, int]]:
    """Prime factorization of ``n`` as ``(prime, multiplicity)`` pairs, ascending."""
    if isinstance(n, bool) or not isinstance(n, int) or n < 2:
        raise InvalidArgumentError(f"factorize needs an integer >= 2, got {n!r}")
    factors = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            count = 0
            while n % p == 0:
                n //= p
                count += 1
            factors.append((p, count))
        p += 1 if p == 2 else 2
    if n > 1:
        factors.append((n, 1))
    return factors


def is_prime(n: int) -> bool:
    return n >= 2 and factorize(n) == [(n, 1)]


def prime_split(d: int) -> tuple[int, ...]:
    """Ascending list of prime factors of ``d``, each repeated by multiplicity."""
    return tuple(p for p, alpha in factorize(d) for _ in range(alpha))


@dataclass(frozen=True)
class HybridDims:
    """Ordered local dimensions of a multi-particle system."""

    dims: tuple[int, ...]
    splits: tuple[tuple[int, ...], ...] = field(init=False, repr=False, compare=False)

    def __init__(self, dims: Iterable[int]):
        dims = tuple(dims)
        if not dims:
            raise InvalidArgumentError("at least one particle is required")
        for d in dims:
            if isinstance(d, bool) or not isinstance(d, int) or d < 2:
                raise InvalidArgumentError(f"local dimensions must be integers >= 2, got {d!r}")
        total = math.prod(dims)
        if total > _dimension_cap:
            raise CapacityError(f"total dimension {total} exceeds cap {_dimension_cap}")
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "splits", tuple(prime_split(d) for d in dims))

    def __len__(self) -> int:
        return len(self.dims)

    def __iter__(self) -> Iterator[int]:
        return iter(self.dims)

    def __getitem__(self, k: int) -> int:
        return self.dims[k]

    @property
    def n(self) -> int:
        return len(self.dims)

    @property
    def total(self) -> int:
        return math.prod(self.dims)

    @property
    def all_prime(self) -> bool:
        return all(len(s) == 1 for s in self.splits)

    def prime_dims(self) -> "HybridDims":
        """Dimensions after splitting every composite particle into prime factors."""
        return HybridDims(p for split in self.splits for p in split)


def as_dims(dims: HybridDims | Sequence[int]) -> HybridDims:
    return dims if isinstance(dims, HybridDims) else HybridDims(dims)


def lcm_of(dims: HybridDims | Sequence[int]) -> int:
    return math.lcm(*as_dims(dims).dims)


def reduce_tuple(values: Sequence[int], dims: HybridDims | Sequence[int]) -> tuple[int, ...]:
    """Reduce each entry mod its local dimension."""
    dims = as_dims(dims)
    if len(values) != dims.n:
        raise InvalidArgumentError(f"tuple length {len(values)} does not match {dims.n} particles")
    return tuple(int(v) % d for v, d in zip(values, dims.dims))


def _check_conforms(t: Sequence[int], dims: HybridDims, name: str) -> None:
    if len(t) != dims.n:
        raise InvalidArgumentError(f"{name} has length {len(t)}, expected {dims.n}")


def residue_weights(h: Sequence[int], dims: HybridDims | Sequence[int]) -> tuple[list[int], int]:
    """Integer weights ``h_k * L / d_k`` and the modulus ``L``.

    ``residue_condition(h, j)`` holds iff ``sum(w_k * j_k) % L == 0``.
    """
    dims = as_dims(dims)
    modulus = lcm_of(dims)
    return [int(hk) * (modulus // d) for hk, d in zip(h, dims.dims)], modulus


def residue_condition(h: Sequence[int], j: Sequence[int], dims: HybridDims | Sequence[int]) -> bool:
    """True iff ``sum_k h_k j_k / d_k`` is an integer."""
    dims = as_dims(dims)
    _check_conforms(h, dims, "h")
    _check_conforms(j, dims, "j")
    weights, modulus = residue_weights(h, dims)
    return sum(w * int(jk) for w, jk in zip(weights, j)) % modulus == 0


def residue_fraction(h: Sequence[int], j: Sequence[int], dims: HybridDims | Sequence[int]) -> Fraction:
    """The rational ``sum_k h_k j_k / d_k`` itself, for diagnostics and oracles."""
    dims = as_dims(dims)
    return sum((Fraction(int(a) * int(b), d) for a, b, d in zip(h, j, dims.dims)), Fraction(0))


def count_condition_solutions(
    subset: Iterable[Sequence[int]], j: Sequence[int], dims: HybridDims | Sequence[int]
) -> int:
    """Number of tuples ``h`` in ``subset`` with ``residue_condition(h, j)``."""
    dims = as_dims(dims)
    return sum(1 for h in subset if residue_condition(h, j, dims))


def all_tuples(dims: HybridDims | Sequence[int]) -> Iterator[tuple[int, ...]]:
    """Every tuple of ``Z_{d_0} x ... x Z_{d_{n-1}}`` in big-endian order."""
    dims = as_dims(dims)
    index = [0] * dims.n
    for _ in range(dims.total):
        yield tuple(index)
        for k in reversed(range(dims.n)):
            index[k] += 1
            if index[k] < dims.dims[k]:
                break
            index[k] = 0


def tuple_to_index(t: Sequence[int], dims: HybridDims | Sequence[int]) -> int:
    dims = as_dims(dims)
    _check_conforms(t, dims, "tuple")
    index = 0
    for digit, d in zip(t, dims.dims):
        if not 0 <= digit < d:
            raise InvalidArgumentError(f"digit {digit} out of range for dimension {d}")
        index = index * d + int(digit)
    return index


def index_to_tuple(index: int, dims: HybridDims | Sequence[int]) -> tuple[int, ...]:
    dims = as_dims(dims)
    if not 0 <= index < dims.total:
        raise InvalidArgumentError(f"index {index} out of range for total dimension {dims.total}")
    digits = []
    for d in reversed(dims.dims):
        index, digit = divmod(index, d)
        digits.append(digit)
    return tuple(reversed(digits))


def element_order(h: Sequence[int], dims: HybridDims | Sequence[int]) -> int:
    """Order of ``prod_k Z_k^{h_k}``, i.e. the smallest ``r`` with ``r h_k / d_k`` integral for all k."""
    dims = as_dims(dims)
    return math.lcm(*(d // math.gcd(int(hk) % d, d) for hk, d in zip(h, dims.dims)))
