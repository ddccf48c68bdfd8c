"""Verification operator built from a test partition.

For weights ``mu`` the coefficient of outcome ``j`` is

    lambda(j) = sum_i mu_i * #{h in C_i : sum_k h_k j_k / d_k in Z} / |C_i|

and the verification operator is ``U diag(lambda) U^dagger``.  Its second
largest eigenvalue ``beta`` sets the spectral gap ``nu = 1 - beta``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from ..errors import InternalError, InvalidArgumentError
from ..kernels import count_table
from ..qarith import HybridDims, index_to_tuple
from ..qlinalg import dagger, hermitian_spectrum
from .partitions import TestPartition
from .simplex import maximize

CERTIFY_DENOMINATORS = (10**2, 10**3, 10**4, 10**5, 10**6, 10**7)


@dataclass(frozen=True)
class LambdaTable:
    """Solution counts ``counts[i, j]`` and subset sizes; the weights are applied later."""

    dims: HybridDims
    counts: np.ndarray
    sizes: tuple[int, ...]

    def coefficient_matrix(self) -> np.ndarray:
        """``A[j, i] = counts[i, j] / |C_i|`` so that ``lambda = A @ mu``."""
        return (self.counts / np.asarray(self.sizes, dtype=float)[:, None]).T

    def values(self, weights: Sequence[float]) -> np.ndarray:
        return self.coefficient_matrix() @ np.asarray([float(w) for w in weights])

    def exact(self, weights: Sequence[Fraction]) -> list[Fraction]:
        weights = [Fraction(w) for w in weights]
        out = []
        for j in range(self.counts.shape[1]):
            out.append(sum((w * int(c) / s for w, c, s in zip(weights, self.counts[:, j], self.sizes)), Fraction(0)))
        return out


def lambda_table(partition: TestPartition) -> LambdaTable:
    sizes = partition.sizes()
    if any(s == 0 for s in sizes):
        raise InvalidArgumentError("test subsets must be nonempty")
    counts = count_table([s.tuples for s in partition.subsets], partition.dims)
    return LambdaTable(partition.dims, counts, tuple(sizes))


def lambda_coefficients(partition: TestPartition, weights: Sequence | None = None) -> dict[tuple[int, ...], Fraction | float]:
    """Map outcome tuple to its coefficient; exact rationals when the weights are rational."""
    weights = partition.weights if weights is None else tuple(weights)
    table = lambda_table(partition)
    if all(isinstance(w, (Fraction, int)) for w in weights):
        values: Sequence = table.exact(weights)
    else:
        values = table.values(weights)
    return {index_to_tuple(j, partition.dims): v for j, v in enumerate(values)}


@dataclass(frozen=True)
class VerificationOperator:
    dims: HybridDims
    weights: tuple
    lambdas: np.ndarray
    omega: np.ndarray
    beta: float
    nu: float

    def spectrum(self) -> np.ndarray:
        return hermitian_spectrum(self.omega)[0]


def assemble_omega(unitary: np.ndarray, partition: TestPartition, weights: Sequence | None = None) -> VerificationOperator:
    """``Omega = U diag(lambda) U^dagger``; the all-zero outcome carries coefficient 1."""
    weights = partition.weights if weights is None else tuple(weights)
    lambdas = lambda_table(partition).values(weights)
    if abs(lambdas[0] - 1) > 1e-12:
        raise InternalError(f"coefficient of the all-zero outcome is {lambdas[0]}, expected 1")
    omega = (unitary * lambdas) @ dagger(unitary)
    beta = float(lambdas[1:].max()) if lambdas.size > 1 else 0.0
    return VerificationOperator(partition.dims, weights, lambdas, omega, beta, 1.0 - beta)


@dataclass(frozen=True)
class OptimalWeights:
    weights: np.ndarray
    beta: float
    nu: float
    beta_exact: Fraction | None
    weights_exact: tuple[Fraction, ...] | None

    @property
    def nu_exact(self) -> Fraction | None:
        return None if self.beta_exact is None else 1 - self.beta_exact


def _rationalize(values: np.ndarray, max_denominator: int) -> list[Fraction]:
    fracs = [Fraction(float(v)).limit_denominator(max_denominator) for v in np.clip(values, 0, None)]
    total = sum(fracs, Fraction(0))
    if total == 0:
        raise ZeroDivisionError
    return [f / total for f in fracs]


def _certify(counts: np.ndarray, sizes: Sequence[int], mu: np.ndarray, prices: np.ndarray):
    """Exact minimax value when rounded primal and dual strategies meet, else ``None``.

    ``max_j (A mu)_j`` bounds the value from above for any mixed ``mu``
    and ``min_i (q A)_i`` bounds it from below for any mixed ``q``.
    """
    counts_obj = counts.astype(object)
    for den in CERTIFY_DENOMINATORS:
        try:
            mu_q = _rationalize(mu, den)
            q_q = _rationalize(prices, den)
        except ZeroDivisionError:
            return None
        lcm_mu = math.lcm(*(f.denominator for f in mu_q))
        scale = math.lcm(*sizes)
        coeffs = np.array([f.numerator * (lcm_mu // f.denominator) * (scale // s) for f, s in zip(mu_q, sizes)], dtype=object)
        upper = Fraction(int(max(coeffs @ counts_obj)), lcm_mu * scale)
        lcm_q = math.lcm(*(f.denominator for f in q_q))
        q_int = np.array([f.numerator * (lcm_q // f.denominator) for f in q_q], dtype=object)
        column_sums = counts_obj @ q_int
        lower = min(Fraction(int(cs), lcm_q * s) for cs, s in zip(column_sums, sizes))
        if upper == lower:
            return upper, tuple(mu_q)
    return None


def optimize_weights(partition: TestPartition) -> OptimalWeights:
    """Weights minimizing the largest nontrivial coefficient, via the equivalent matrix game."""
    table = lambda_table(partition)
    sizes = table.sizes
    tau = len(sizes)
    counts = table.counts[:, 1:]
    if counts.shape[1] == 0:
        raise InvalidArgumentError("a one-dimensional system has nothing to verify")
    zero_columns = np.flatnonzero(~counts.any(axis=1))
    if zero_columns.size:
        mu = np.zeros(tau)
        mu[zero_columns[0]] = 1.0
        exact = tuple(Fraction(int(i == zero_columns[0])) for i in range(tau))
        return OptimalWeights(mu, 0.0, 1.0, Fraction(0), exact)

    unique_rows, inverse = np.unique(counts.T, axis=0, return_inverse=True)
    a = unique_rows / np.asarray(sizes, dtype=float)
    # with x = mu / beta the game becomes: max sum(x) s.t. a x <= 1, x >= 0
    result = maximize(np.ones(tau), a, np.ones(a.shape[0]))
    if result.value <= 0:
        raise InternalError("matrix game produced a nonpositive value")
    beta = 1.0 / result.value
    mu = result.x * beta
    mu = np.clip(mu, 0, None)
    mu /= mu.sum()
    beta = float((a @ mu).max())
    certified = _certify(unique_rows.T, sizes, mu, result.dual)
    if certified is None:
        return OptimalWeights(mu, beta, 1.0 - beta, None, None)
    beta_exact, mu_exact = certified
    return OptimalWeights(mu, beta, 1.0 - beta, beta_exact, mu_exact)


def n_opt(nu: float, epsilon: float, delta: float) -> tuple[int, int]:
    """Number of tests: ``ceil(ln delta / ln(1 - nu eps))`` and the looser ``ceil(ln(1/delta) / (nu eps))``."""
    nu, epsilon, delta = float(nu), float(epsilon), float(delta)
    if nu <= 0:
        raise InvalidArgumentError(f"spectral gap must be positive, got {nu}")
    if not 0 < epsilon < 1:
        raise InvalidArgumentError(f"epsilon must lie in (0, 1), got {epsilon}")
    if delta <= 0:
        raise InvalidArgumentError(f"delta must be positive, got {delta}")
    if delta >= 1:
        return 0, 0
    rate = nu * epsilon
    if rate >= 1:
        return 1, 1
    exact = _ceil(math.log(delta) / math.log1p(-rate))
    bound = _ceil(math.log(1 / delta) / rate)
    return max(exact, 1), max(bound, 1)


def _ceil(x: float) -> int:
    nearest = round(x)
    return int(nearest) if abs(x - nearest) < 1e-9 * max(1.0, abs(x)) else math.ceil(x)
