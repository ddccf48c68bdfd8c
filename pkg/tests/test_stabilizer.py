import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quditverify.errors import InvalidArgumentError
from quditverify.gates import pauli_x, pauli_z
from quditverify.qarith import all_tuples, residue_condition
from quditverify.qlinalg import is_hermitian, is_projector
from quditverify.stabilizer import (
    AdaptivePlan,
    bell_like_plan,
    check_group,
    computational_plan,
    density_identity_residual,
    eigen1_projector,
    generators,
    measurement_operator,
    path_amplitudes,
    path_probabilities,
    path_projector,
    power_sum_projector,
    reduced_eigenbasis_plan,
    solution_set_projector,
    support,
)
from quditverify.states import StateSpec, build

I2 = np.eye(2)
X = np.array([[0, 1], [1, 0]])
Y = np.array([[0, -1j], [1j, 0]])
Z = np.diag([1.0, -1.0])


def haar_unitary(size, rng):
    a = rng.normal(size=(size, size)) + 1j * rng.normal(size=(size, size))
    q, r = np.linalg.qr(a)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def group_of(spec):
    built = build(spec)
    return generators(built.unitary, built.dims)


def test_identity_generator_is_z():
    g = generators(np.eye(2), (2,))
    assert np.allclose(g.generators[0], Z)


def test_bell_like_second_generator_is_zz():
    g = group_of(StateSpec.bell_like(0.4))
    assert np.max(np.abs(g.generators[1] - np.kron(Z, Z))) < 1e-10


def test_psi1_first_generator():
    # fixes psi1 under the +1 shift convention
    w = cmath.exp(2j * math.pi / 3)
    expected = np.kron(pauli_x(3), np.diag([1, w]))
    g = group_of(StateSpec.psi1())
    assert np.max(np.abs(g.generators[0] - expected)) < 1e-10


def test_non_unitary_rejected():
    with pytest.raises(InvalidArgumentError):
        generators(np.diag([1.0, 2.0]), (2,))
    with pytest.raises(InvalidArgumentError):
        generators(np.eye(4), (3,))


def test_zero_exponents_give_identity(family):
    g = group_of(family)
    assert np.max(np.abs(g.element([0] * g.dims.n) - np.eye(g.dims.total))) < 1e-10


@pytest.mark.parametrize("theta", [0.3, math.pi / 4, 1.2])
def test_bell_like_product_element(theta):
    g = group_of(StateSpec.bell_like(theta))
    expected = -math.cos(2 * theta) * np.kron(I2, Z) - math.sin(2 * theta) * np.kron(Y, Y)
    assert np.max(np.abs(g.element((1, 1)) - expected)) < 1e-10


def test_element_is_product_of_generator_powers(family):
    g = group_of(family)
    rng = np.random.default_rng(7)
    h = [int(rng.integers(0, d)) for d in g.dims.dims]
    product = np.eye(g.dims.total, dtype=complex)
    for gen, e in zip(g.generators, h):
        product = product @ np.linalg.matrix_power(gen, e)
    assert np.max(np.abs(g.element(h) - product)) < 1e-9
    assert np.max(np.abs(g.element(h) @ g.psi - g.psi)) < 1e-9


def test_hybrid_identity_element():
    g = generators(np.eye(6), (3, 2))
    assert np.max(np.abs(g.element((2, 1)) - np.kron(np.linalg.matrix_power(pauli_z(3), 2), pauli_z(2)))) < 1e-12


def test_generators_are_non_hermitian_for_qutrits():
    g = generators(np.eye(3), (3,))
    assert np.max(np.abs(g.generators[0] - g.generators[0].conj().T)) > 0.1


def test_group_invariants_for_every_family(family):
    assert check_group(group_of(family)).worst() < 1e-9


def test_projector_examples():
    p = eigen1_projector(generators(np.eye(2), (2,)), (1,))
    assert np.allclose(p, np.diag([1, 0]))
    p = eigen1_projector(generators(np.eye(6), (3, 2)), (1, 1))
    expected = np.zeros((6, 6))
    expected[0, 0] = 1
    assert np.max(np.abs(p - expected)) < 1e-12


def test_bell_like_parity_projector():
    built = build(StateSpec.bell_like(0.6))
    g = generators(built.unitary, built.dims)
    # solution set {j1 = 0} pushed through U, computed independently
    cols = built.unitary[:, [0, 2]]
    assert np.max(np.abs(eigen1_projector(g, (0, 1)) - cols @ cols.conj().T)) < 1e-10
    span = np.zeros((4, 4))
    span[0, 0] = span[3, 3] = 1
    assert np.max(np.abs(eigen1_projector(g, (0, 1)) - span)) < 1e-10


def test_zero_tuple_projector_rejected():
    with pytest.raises(InvalidArgumentError):
        eigen1_projector(generators(np.eye(2), (2,)), (0,))


def test_power_sum_matches_solution_set(family):
    g = group_of(family)
    rng = np.random.default_rng(11)
    for _ in range(3):
        h = [int(rng.integers(0, d)) for d in g.dims.dims]
        if not any(h):
            h[0] = 1
        p = power_sum_projector(g, h)
        assert is_projector(p, 1e-9)
        assert np.max(np.abs(p @ g.psi - g.psi)) < 1e-9
        assert np.max(np.abs(p - solution_set_projector(g, h))) < 1e-10


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), dims=st.sampled_from([(2, 3), (3, 2), (5,), (2, 2, 3)]))
def test_projector_routes_agree_on_random_unitaries(seed, dims):
    rng = np.random.default_rng(seed)
    g = generators(haar_unitary(math.prod(dims), rng), dims)
    h = [int(rng.integers(0, d)) for d in dims]
    if not any(h):
        h[-1] = 1
    assert np.max(np.abs(power_sum_projector(g, h) - solution_set_projector(g, h))) < 1e-10


def test_solution_set_rank_counts_residue_solutions():
    g = generators(np.eye(12), (2, 2, 3))
    for h in all_tuples((2, 2, 3)):
        if not any(h):
            continue
        count = sum(residue_condition(h, j, (2, 2, 3)) for j in all_tuples((2, 2, 3)))
        assert round(np.trace(solution_set_projector(g, h)).real) == count


def test_density_identity_trivial():
    assert density_identity_residual(generators(np.eye(2), (2,))) < 1e-12


@pytest.mark.parametrize(
    "spec",
    [StateSpec.psi1(), StateSpec.bell_like(0.5), StateSpec.ghz(3, 3)],
    ids=["psi1", "bell_like", "ghz_3_3"],
)
def test_density_identity_families(spec):
    assert density_identity_residual(group_of(spec)) <= 1e-10


@pytest.mark.parametrize("seed", range(20))
def test_density_identity_random(seed):
    rng = np.random.default_rng(seed)
    g = generators(haar_unitary(6, rng), (3, 2))
    assert density_identity_residual(g) <= 1e-10


def test_density_identity_rejects_composite():
    with pytest.raises(InvalidArgumentError):
        density_identity_residual(generators(np.eye(6), (6,)))


def test_composite_dims_are_split():
    g = generators(np.eye(12), (6, 2))
    assert g.dims.dims == (2, 3, 2)
    assert check_group(g).worst() < 1e-12


def test_computational_plan_support():
    psi = np.zeros(16)
    psi[0] = 1
    plan = computational_plan((2, 2, 2, 2))
    assert support(plan, psi) == {(0, 0, 0, 0)}


def test_computational_plan_last_outcome_deterministic():
    psi = np.zeros(16)
    psi[0] = 1
    plan = computational_plan((2, 2, 2, 2), order=(2, 0, 3, 1))
    probs = path_probabilities(plan, psi)
    assert sum(p for path, p in probs.items() if path[-1] == 0) == pytest.approx(1.0, abs=1e-12)


def test_path_projectors_resolve_identity():
    plan = bell_like_plan(0.7)
    paths = list(plan.paths())
    total = sum(path_projector(plan, p) for p in paths)
    assert np.max(np.abs(total - np.eye(4))) < 1e-9
    for a in paths:
        for b in paths:
            prod = path_projector(plan, a) @ path_projector(plan, b)
            expected = path_projector(plan, a) if a == b else 0
            assert np.max(np.abs(prod - expected)) < 1e-9


@pytest.mark.parametrize("theta", [0.3, math.pi / 4, 1.2])
def test_bell_like_plan_realizes_projector(theta):
    built = build(StateSpec.bell_like(theta))
    plan = bell_like_plan(theta)
    assert support(plan, built.psi) == {(0, 0), (1, 0)}
    g = generators(built.unitary, built.dims)
    assert np.max(np.abs(measurement_operator(plan) - eigen1_projector(g, (1, 0)))) < 1e-9
    assert np.max(np.abs(measurement_operator(plan) @ built.psi - built.psi)) < 1e-9


def test_bad_basis_rejected():
    plan = AdaptivePlan((2,), (0,), lambda prefix: np.diag([1.0, 2.0]))
    with pytest.raises(InvalidArgumentError):
        plan.basis(())
    with pytest.raises(InvalidArgumentError):
        AdaptivePlan((2, 2), (0, 0), lambda prefix: I2)


def test_reduced_eigenbasis_support(family):
    built = build(family)
    if built.dims.total > 512:
        pytest.skip("large")
    plan = reduced_eigenbasis_plan(built.psi, built.dims)
    paths = support(plan, built.psi)
    assert all(path[-1] == 0 for path in paths)
    weighted = plan.with_weights(lambda path: 1.0 if path in paths else 0.0)
    assert np.max(np.abs(measurement_operator(weighted) @ built.psi - built.psi)) < 1e-9


def test_path_probabilities_match_projectors():
    built = build(StateSpec.ghz(3, 2))
    plan = reduced_eigenbasis_plan(built.psi, built.dims, order=(2, 0, 1))
    rho = np.outer(built.psi, built.psi.conj())
    probs = path_probabilities(plan, rho)
    for path in plan.paths():
        exact = np.trace(path_projector(plan, path) @ rho).real
        assert probs.get(path, 0.0) == pytest.approx(exact, abs=1e-12)
    amps = path_amplitudes(plan, built.psi)
    assert sum(abs(a) ** 2 for a in amps.values()) == pytest.approx(1.0)
    assert is_hermitian(measurement_operator(plan), 1e-12)
