"""Generalized stabilizer groups and adaptive local measurement plans.

For a preparation unitary ``U`` the generators are ``g_k = U Z_k U^dagger``.
A group element is labelled by an exponent tuple ``h`` and equals
``U diag(omega-phases) U^dagger``; its eigenvalue-1 projector is obtained
either as the power sum ``(1/L) sum_l g^l`` or from the outcome tuples
solving the residue condition.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Iterator, Mapping, Sequence

import numpy as np

from .errors import InvalidArgumentError
from .gates import roots_of_unity
from .kernels import residue_table
from .qarith import HybridDims, all_tuples, as_dims, lcm_of, reduce_tuple, residue_weights
from .qlinalg import dagger, is_unitary, max_abs

SUPPORT_TOL = 1e-9


def _digit_grid(dims: HybridDims) -> np.ndarray:
    """``(n, D)`` array of outcome digits in big-endian order."""
    return np.indices(dims.dims).reshape(dims.n, -1)


def _phase_diagonal(h: Sequence[int], dims: HybridDims) -> np.ndarray:
    weights, modulus = residue_weights(h, dims)
    exponents = (np.asarray(weights, dtype=np.int64) @ _digit_grid(dims)) % modulus
    return roots_of_unity(modulus)[exponents]


@dataclass(frozen=True)
class StabilizerGroup:
    """Generators ``U Z_k U^dagger`` of the group fixing ``U|0...0>``.

    ``dims`` are prime-split; ``source_dims`` keeps the dimensions the
    unitary was supplied with.
    """

    dims: HybridDims
    unitary: np.ndarray
    source_dims: HybridDims

    @property
    def psi(self) -> np.ndarray:
        return self.unitary[:, 0]

    @property
    def modulus(self) -> int:
        return lcm_of(self.dims)

    @cached_property
    def generators(self) -> tuple[np.ndarray, ...]:
        gens = []
        for k in range(self.dims.n):
            h = [0] * self.dims.n
            h[k] = 1
            gens.append(self.element(h))
        return tuple(gens)

    def element(self, h: Sequence[int]) -> np.ndarray:
        """``prod_k g_k^{h_k}`` computed as ``U D U^dagger`` with ``D`` diagonal."""
        h = reduce_tuple(h, self.dims)
        return (self.unitary * _phase_diagonal(h, self.dims)) @ dagger(self.unitary)

    def unit_tuples(self) -> list[tuple[int, ...]]:
        return [tuple(1 if i == k else 0 for i in range(self.dims.n)) for k in range(self.dims.n)]


def generators(unitary: np.ndarray, dims: HybridDims | Sequence[int]) -> StabilizerGroup:
    """Stabilizer group of ``unitary |0...0>``; composite dimensions are split into primes first."""
    source = as_dims(dims)
    u = np.asarray(unitary, dtype=np.complex128)
    if u.shape != (source.total, source.total):
        raise InvalidArgumentError(f"unitary shape {u.shape} does not match total dimension {source.total}")
    if not is_unitary(u, 1e-10):
        raise InvalidArgumentError("preparation matrix is not unitary")
    return StabilizerGroup(source.prime_dims(), u, source)


def group_element(group: StabilizerGroup, h: Sequence[int]) -> np.ndarray:
    return group.element(h)


def power_sum_projector(group: StabilizerGroup, h: Sequence[int]) -> np.ndarray:
    """``(1/L) sum_{l<L} g_h^l`` with ``L`` the lcm of the dimensions."""
    g = group.element(h)
    total = np.eye(g.shape[0], dtype=np.complex128)
    power = total.copy()
    for _ in range(1, group.modulus):
        power = power @ g
        total += power
    return total / group.modulus


def solution_set_projector(group: StabilizerGroup, h: Sequence[int]) -> np.ndarray:
    """``sum_j U|j><j|U^dagger`` over outcome tuples with ``sum_k h_k j_k / d_k`` integral."""
    h = reduce_tuple(h, group.dims)
    mask = residue_table([h], group.dims)[0]
    columns = group.unitary[:, mask]
    return columns @ dagger(columns)


def eigen1_projector(group: StabilizerGroup, h: Sequence[int]) -> np.ndarray:
    if not any(reduce_tuple(h, group.dims)):
        raise InvalidArgumentError("the all-zero exponent tuple has no proper eigen-1 projector")
    return power_sum_projector(group, h)


def density_identity_residual(group: StabilizerGroup, psi: np.ndarray | None = None) -> float:
    """Max-norm distance between ``prod_i (sum_j g_i^j) / prod_i d_i`` and ``|psi><psi|``."""
    if not group.source_dims.all_prime:
        raise InvalidArgumentError(f"the density identity needs prime dimensions, got {group.source_dims.dims}")
    psi = group.psi if psi is None else np.asarray(psi)
    size = group.dims.total
    product = np.eye(size, dtype=np.complex128)
    for d, g in zip(group.dims.dims, group.generators):
        block = np.eye(size, dtype=np.complex128)
        power = block.copy()
        for _ in range(1, d):
            power = power @ g
            block += power
        product = product @ block
    product /= size
    return max_abs(product - np.outer(psi, np.conj(psi)))


@dataclass(frozen=True)
class GroupCheck:
    unitarity: float
    fixes_state: float
    commutation: float
    order: float

    def worst(self) -> float:
        return max(self.unitarity, self.fixes_state, self.commutation, self.order)


def check_group(group: StabilizerGroup) -> GroupCheck:
    """Largest deviations of the four defining properties of the generators."""
    eye = np.eye(group.dims.total)
    gens = group.generators
    unitarity = max(max_abs(dagger(g) @ g - eye) for g in gens)
    fixes = max(max_abs(g @ group.psi - group.psi) for g in gens)
    commute = max(
        (max_abs(a @ b - b @ a) for i, a in enumerate(gens) for b in gens[i + 1 :]),
        default=0.0,
    )
    order = max(max_abs(np.linalg.matrix_power(g, d) - eye) for g, d in zip(gens, group.dims.dims))
    return GroupCheck(unitarity, fixes, commute, order)


# adaptive plans

BasisChooser = Callable[[tuple[int, ...]], np.ndarray]


@dataclass(frozen=True)
class AdaptivePlan:
    """Particle-by-particle measurement where each basis may depend on earlier outcomes.

    Outcome tuples ``J`` are listed in measurement order.  ``chooser(prefix)``
    returns the unitary whose columns are the basis for the next particle.
    """

    dims: HybridDims
    order: tuple[int, ...]
    chooser: BasisChooser
    weights: Callable[[tuple[int, ...]], float] = field(default=lambda path: 1.0)

    def __post_init__(self):
        object.__setattr__(self, "dims", as_dims(self.dims))
        object.__setattr__(self, "order", tuple(int(k) for k in self.order))
        if sorted(self.order) != list(range(self.dims.n)):
            raise InvalidArgumentError(f"order {self.order} is not a permutation of 0..{self.dims.n - 1}")

    def step_dims(self) -> tuple[int, ...]:
        return tuple(self.dims[k] for k in self.order)

    def basis(self, prefix: tuple[int, ...]) -> np.ndarray:
        u = np.asarray(self.chooser(tuple(prefix)), dtype=np.complex128)
        d = self.dims[self.order[len(prefix)]]
        if u.shape != (d, d) or not is_unitary(u, 1e-10):
            raise InvalidArgumentError(f"basis after outcomes {prefix} is not a {d}x{d} unitary")
        return u

    def paths(self) -> Iterator[tuple[int, ...]]:
        return all_tuples(self.step_dims())

    def with_weights(self, weights: Callable[[tuple[int, ...]], float]) -> "AdaptivePlan":
        return AdaptivePlan(self.dims, self.order, self.chooser, weights)


def path_vector(plan: AdaptivePlan, path: Sequence[int]) -> np.ndarray:
    """Product vector ``|b_J>`` with ``Pi(J) = |b_J><b_J|``."""
    path = tuple(path)
    if len(path) != plan.dims.n:
        raise InvalidArgumentError(f"path length {len(path)} does not match {plan.dims.n} particles")
    local: dict[int, np.ndarray] = {}
    for step, particle in enumerate(plan.order):
        local[particle] = plan.basis(path[:step])[:, path[step]]
    vector = np.ones(1, dtype=np.complex128)
    for particle in range(plan.dims.n):
        vector = np.kron(vector, local[particle])
    return vector


def path_projector(plan: AdaptivePlan, path: Sequence[int]) -> np.ndarray:
    v = path_vector(plan, path)
    return np.outer(v, np.conj(v))


def measurement_operator(plan: AdaptivePlan) -> np.ndarray:
    """``M = sum_J Lambda(J) Pi(J)``."""
    size = plan.dims.total
    m = np.zeros((size, size), dtype=np.complex128)
    for path in plan.paths():
        weight = plan.weights(path)
        if weight:
            m += weight * path_projector(plan, path)
    return m


def _conditional_branches(plan: AdaptivePlan, state: np.ndarray, prefix: tuple[int, ...]):
    """Unnormalized post-measurement states of the remaining particles for each next outcome.

    ``state`` has one axis per unmeasured particle, in the plan's remaining order.
    """
    u = plan.basis(prefix)
    # project the leading axis onto each basis vector: <b_j| acting on axis 0
    return np.tensordot(np.conj(u).T, state, axes=([1], [0]))


def _reordered(plan: AdaptivePlan, psi: np.ndarray) -> np.ndarray:
    return np.transpose(np.asarray(psi).reshape(plan.dims.dims), plan.order)


def path_amplitudes(plan: AdaptivePlan, psi: np.ndarray, tol: float = 0.0) -> dict[tuple[int, ...], complex]:
    """``<b_J|psi>`` for every path, skipping branches whose norm is at most ``tol``."""
    result: dict[tuple[int, ...], complex] = {}

    def walk(prefix: tuple[int, ...], state: np.ndarray) -> None:
        if len(prefix) == plan.dims.n:
            result[prefix] = complex(state)
            return
        for j, branch in enumerate(_conditional_branches(plan, state, prefix)):
            if np.linalg.norm(branch) > tol:
                walk(prefix + (j,), branch)

    walk((), _reordered(plan, psi))
    return result


def support(plan: AdaptivePlan, psi: np.ndarray, tol: float = SUPPORT_TOL) -> set[tuple[int, ...]]:
    """Paths with ``||Pi(J) psi|| > tol``."""
    return {path for path, amp in path_amplitudes(plan, psi, tol).items() if abs(amp) > tol}


def path_probabilities(plan: AdaptivePlan, density: np.ndarray) -> dict[tuple[int, ...], float]:
    """Exact Born probabilities ``tr(Pi(J) rho)`` for a state vector or density matrix."""
    density = np.asarray(density)
    if density.ndim == 1:
        return {p: abs(a) ** 2 for p, a in path_amplitudes(plan, density).items()}
    values, vectors = np.linalg.eigh(density)
    probs: dict[tuple[int, ...], float] = {}
    for w, v in zip(values, vectors.T):
        if w <= 0:
            continue
        for path, amp in path_amplitudes(plan, v).items():
            probs[path] = probs.get(path, 0.0) + w * abs(amp) ** 2
    return probs


# stock plans

def computational_plan(dims: HybridDims | Sequence[int], order: Sequence[int] | None = None) -> AdaptivePlan:
    dims = as_dims(dims)
    order = tuple(order) if order is not None else tuple(range(dims.n))
    return AdaptivePlan(dims, order, lambda prefix: np.eye(dims[order[len(prefix)]]))


def bell_like_plan(theta: float) -> AdaptivePlan:
    """Test of ``g_(1,0)`` for ``sin(theta)|00> + cos(theta)|11>``.

    Particle 1 is measured in the X basis; particle 0 is then measured in a
    basis whose first vector is the state particle 0 collapses to, so the
    test passes exactly when the second outcome is 0.
    """
    s, c = math.sin(theta), math.cos(theta)
    x_basis = np.array([[1, 1], [1, -1]], dtype=np.complex128) / math.sqrt(2)
    after_plus = np.array([[s, c], [c, -s]], dtype=np.complex128)
    after_minus = np.array([[s, c], [-c, s]], dtype=np.complex128)

    def chooser(prefix: tuple[int, ...]) -> np.ndarray:
        if not prefix:
            return x_basis
        return after_plus if prefix[0] == 0 else after_minus

    return AdaptivePlan(HybridDims((2, 2)), (1, 0), chooser, weights=lambda path: 1.0 if path[1] == 0 else 0.0)


def reduced_eigenbasis_plan(psi: np.ndarray, dims: HybridDims | Sequence[int], order: Sequence[int] | None = None) -> AdaptivePlan:
    """Plan measuring each particle in the eigenbasis of its conditional reduced state.

    The eigenvector with the largest weight comes first, so the last
    particle's outcome is always 0 on the support of ``psi``.
    """
    dims = as_dims(dims)
    order = tuple(order) if order is not None else tuple(range(dims.n))
    root = np.transpose(np.asarray(psi).reshape(dims.dims), order)
    cache: dict[tuple[int, ...], np.ndarray] = {}

    def conditional(prefix: tuple[int, ...]) -> np.ndarray:
        state = root
        for step, j in enumerate(prefix):
            basis = chooser(prefix[:step])
            state = np.tensordot(np.conj(basis[:, j]), state, axes=([0], [0]))
        return state

    def chooser(prefix: tuple[int, ...]) -> np.ndarray:
        if prefix in cache:
            return cache[prefix]
        state = conditional(prefix)
        d = state.shape[0]
        flat = state.reshape(d, -1)
        rho = flat @ np.conj(flat).T
        if np.trace(rho).real <= SUPPORT_TOL:
            basis = np.eye(d, dtype=np.complex128)
        else:
            values, vectors = np.linalg.eigh(rho)
            basis = vectors[:, np.argsort(values)[::-1]]
        cache[prefix] = basis
        return basis

    return AdaptivePlan(dims, order, chooser)
