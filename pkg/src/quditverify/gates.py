"""Single- and multi-qudit gates, and embedding into a hybrid register.

Conventions:

* ``pauli_x(d)`` shifts ``|k> -> |k+1 mod d>``.
* ``qft(d)`` has entries ``omega^(-jk) / sqrt(d)``, the sign that makes
  ``qft(d) @ pauli_z(d) @ qft(d)^dagger == pauli_x(d)``.
* ``ry(phi)`` is the usual real rotation, so ``ry(pi - 2 theta)|0>``
  equals ``sin(theta)|0> + cos(theta)|1>``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any, Mapping, Sequence

import numpy as np

from .errors import InvalidArgumentError
from .qarith import HybridDims, all_tuples, as_dims, is_prime


@lru_cache(maxsize=None)
def roots_of_unity(d: int) -> np.ndarray:
    """``omega_d^k`` for ``k = 0..d-1`` with ``omega_d = exp(2 pi i / d)``."""
    roots = np.exp(2j * np.pi * np.arange(d) / d)
    roots.setflags(write=False)
    return roots


def omega_power(d: int, exponent: int) -> complex:
    return complex(roots_of_unity(d)[int(exponent) % d])


def pauli_z(d: int) -> np.ndarray:
    return np.diag(roots_of_unity(d)).astype(np.complex128)


def pauli_x(d: int) -> np.ndarray:
    return np.roll(np.eye(d, dtype=np.complex128), 1, axis=0)


def powered_z(d: int, s: int) -> np.ndarray:
    """Diagonal gate with phases ``omega^(k^s)``."""
    return np.diag([omega_power(d, pow(k, s, d)) for k in range(d)])


def qft(d: int) -> np.ndarray:
    j, k = np.meshgrid(np.arange(d), np.arange(d), indexing="ij")
    return roots_of_unity(d)[(-j * k) % d] / math.sqrt(d)


def hadamard() -> np.ndarray:
    return qft(2)


def ry(angle: float) -> np.ndarray:
    c, s = math.cos(angle / 2), math.sin(angle / 2)
    return np.array([[c, -s], [s, c]], dtype=np.complex128)


def givens_rotation(d: int, i: int, theta: float) -> np.ndarray:
    """Real rotation by ``theta`` in the plane of levels ``i`` and ``i+1``."""
    if not 0 <= i < d - 1:
        raise InvalidArgumentError(f"Givens level {i} out of range for d={d}")
    r = np.eye(d, dtype=np.complex128)
    c, s = math.cos(theta), math.sin(theta)
    r[i, i] = r[i + 1, i + 1] = c
    r[i + 1, i] = s
    r[i, i + 1] = -s
    return r


def givens_chain(d: int, thetas: Sequence[float]) -> np.ndarray:
    """Rotation ``(0,1)`` applied first, then ``(1,2)``, and so on up to ``(d-2, d-1)``."""
    if len(thetas) != d - 1:
        raise InvalidArgumentError(f"Givens chain on d={d} needs {d - 1} angles, got {len(thetas)}")
    u = np.eye(d, dtype=np.complex128)
    for i, theta in enumerate(thetas):
        u = givens_rotation(d, i, theta) @ u
    return u


def givens_angles(amplitudes: Sequence[float]) -> list[float]:
    """Angles whose chain maps ``|0>`` to the given nonnegative real amplitudes."""
    amps = np.asarray(amplitudes, dtype=float)
    if np.any(amps < 0) or not math.isclose(float(amps @ amps), 1.0, abs_tol=1e-12):
        raise InvalidArgumentError("amplitudes must be nonnegative with unit norm")
    angles = []
    for i in range(len(amps) - 1):
        angles.append(math.atan2(math.sqrt(float(amps[i + 1 :] @ amps[i + 1 :])), amps[i]))
    return angles


def csum(d: int) -> np.ndarray:
    """``|a, b> -> |a, b + a mod d>`` with the control first."""
    u = np.zeros((d * d, d * d), dtype=np.complex128)
    for a in range(d):
        for b in range(d):
            u[a * d + (a + b) % d, a * d + b] = 1.0
    return u


def cnot() -> np.ndarray:
    return csum(2)


def weighted_cz(d: int, weight: int = 1) -> np.ndarray:
    """Diagonal two-qudit gate with phases ``omega^(m i j)``."""
    return edge_phase_gate(d, 2, weight)


def hybrid_cz(d_target: int, d_control: int) -> np.ndarray:
    """Controlled phase acting on ``(target, control)`` in that order: ``sum_i Z_target^i (x) |i><i|``."""
    phases = [omega_power(d_target, a * b) for a in range(d_target) for b in range(d_control)]
    return np.diag(phases).astype(np.complex128)


def edge_phase_gate(d: int, arity: int, weight: int = 1, exponents: Sequence[int] | None = None) -> np.ndarray:
    """Diagonal phase ``omega^(m prod_v i_v^(s_v))`` on ``arity`` qudits of prime dimension ``d``.

    With ``arity == 2`` and unit exponents this is the weighted CZ; larger
    arities give the hypergraph gate; explicit exponents give the
    multigraph variants.
    """
    if not is_prime(d):
        raise InvalidArgumentError(f"edge gates need a prime dimension, got {d}")
    if arity < 2:
        raise InvalidArgumentError("an edge needs at least two vertices")
    exps = [1] * arity if exponents is None else [int(s) % d for s in exponents]
    if len(exps) != arity:
        raise InvalidArgumentError(f"expected {arity} exponents, got {len(exps)}")
    if any(s == 0 for s in exps):
        raise InvalidArgumentError("edge exponents must be nonzero mod d")
    phases = []
    for label in all_tuples((d,) * arity):
        value = weight
        for i, s in zip(label, exps):
            value *= pow(i, s, d)
        phases.append(omega_power(d, value))
    return np.diag(phases).astype(np.complex128)


class GateKind(str, enum.Enum):
    PAULI_Z = "PauliZ"
    PAULI_X = "PauliX"
    POWERED_Z = "PoweredZ"
    QFT = "QFT"
    HADAMARD = "Hadamard"
    RY = "Ry"
    GIVENS_CHAIN = "GivensChain"
    CNOT = "CNOT"
    CSUM = "CSUM"
    CZ_WEIGHTED = "CZweighted"
    HYBRID_CZ = "HybridCZ"
    HYPER_CZ = "HyperCZ"
    MULTI_CZ = "MultiCZ"
    MULTI_HYPER_CZ = "MultiHyperCZ"


_ARITY = {
    GateKind.PAULI_Z: 1,
    GateKind.PAULI_X: 1,
    GateKind.POWERED_Z: 1,
    GateKind.QFT: 1,
    GateKind.HADAMARD: 1,
    GateKind.RY: 1,
    GateKind.GIVENS_CHAIN: 1,
    GateKind.CNOT: 2,
    GateKind.CSUM: 2,
    GateKind.CZ_WEIGHTED: 2,
    GateKind.HYBRID_CZ: 2,
    GateKind.MULTI_CZ: 2,
}


@dataclass(frozen=True)
class GateSpec:
    """A gate kind, the particles it acts on, and its parameters."""

    kind: GateKind
    targets: tuple[int, ...]
    params: Mapping[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "kind", GateKind(self.kind))
        object.__setattr__(self, "targets", tuple(int(t) for t in self.targets))
        if len(set(self.targets)) != len(self.targets):
            raise InvalidArgumentError(f"repeated target in {self.targets}")
        arity = _ARITY.get(self.kind)
        if arity is not None and len(self.targets) != arity:
            raise InvalidArgumentError(f"{self.kind.value} acts on {arity} particle(s), got {len(self.targets)}")
        if arity is None and len(self.targets) < 2:
            raise InvalidArgumentError(f"{self.kind.value} needs at least two targets")

    def to_json(self) -> dict:
        return {"kind": self.kind.value, "targets": list(self.targets), "params": dict(self.params)}

    @classmethod
    def from_json(cls, data: Mapping[str, Any]) -> "GateSpec":
        try:
            return cls(GateKind(data["kind"]), tuple(data["targets"]), dict(data.get("params", {})))
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidArgumentError(f"bad gate record {data!r}: {exc}") from exc


def _uniform_dim(local_dims: Sequence[int], kind: GateKind) -> int:
    if len(set(local_dims)) != 1:
        raise InvalidArgumentError(f"{kind.value} needs equal local dimensions, got {tuple(local_dims)}")
    return local_dims[0]


def build_local(kind: GateKind | str, local_dims: Sequence[int], params: Mapping[str, Any] | None = None) -> np.ndarray:
    """Matrix of a gate on the listed local dimensions (in target order)."""
    kind = GateKind(kind)
    params = params or {}
    d = local_dims[0]
    try:
        if kind is GateKind.PAULI_Z:
            return pauli_z(d)
        if kind is GateKind.PAULI_X:
            return pauli_x(d)
        if kind is GateKind.POWERED_Z:
            return powered_z(d, int(params["s"]))
        if kind is GateKind.QFT:
            return qft(d)
        if kind is GateKind.HADAMARD:
            if d != 2:
                raise InvalidArgumentError("Hadamard needs d=2")
            return hadamard()
        if kind is GateKind.RY:
            if d != 2:
                raise InvalidArgumentError("Ry needs d=2")
            return ry(float(params["angle"]))
        if kind is GateKind.GIVENS_CHAIN:
            return givens_chain(d, [float(t) for t in params["thetas"]])
        if kind is GateKind.CNOT:
            if tuple(local_dims) != (2, 2):
                raise InvalidArgumentError("CNOT needs two qubits")
            return cnot()
        if kind is GateKind.CSUM:
            return csum(_uniform_dim(local_dims, kind))
        if kind is GateKind.CZ_WEIGHTED:
            return weighted_cz(_uniform_dim(local_dims, kind), int(params.get("weight", 1)))
        if kind is GateKind.HYBRID_CZ:
            return hybrid_cz(local_dims[0], local_dims[1])
        if kind is GateKind.HYPER_CZ:
            return edge_phase_gate(_uniform_dim(local_dims, kind), len(local_dims), int(params.get("weight", 1)))
        # MultiCZ and MultiHyperCZ share one construction
        return edge_phase_gate(
            _uniform_dim(local_dims, kind), len(local_dims), int(params.get("weight", 1)), params["exponents"]
        )
    except KeyError as exc:
        raise InvalidArgumentError(f"{kind.value} is missing parameter {exc}") from exc


def _apply(local: np.ndarray, targets: Sequence[int], dims: HybridDims, array: np.ndarray) -> np.ndarray:
    """Apply ``local`` on ``targets`` to ``array`` whose first axis is the global index."""
    n = dims.n
    trailing = array.shape[1:]
    tensor = array.reshape(dims.dims + trailing)
    tensor = np.moveaxis(tensor, list(targets), list(range(len(targets))))
    moved_shape = tensor.shape
    block = local.shape[0]
    tensor = (local @ tensor.reshape(block, -1)).reshape(moved_shape)
    tensor = np.moveaxis(tensor, list(range(len(targets))), list(targets))
    return tensor.reshape((dims.total,) + trailing) if n else tensor


def _check_targets(local: np.ndarray, targets: Sequence[int], dims: HybridDims) -> None:
    if len(set(targets)) != len(targets):
        raise InvalidArgumentError(f"targets must be distinct, got {tuple(targets)}")
    if any(not 0 <= t < dims.n for t in targets):
        raise InvalidArgumentError(f"targets {tuple(targets)} out of range for {dims.n} particles")
    block = math.prod(dims[t] for t in targets)
    if local.shape != (block, block):
        raise InvalidArgumentError(f"local matrix {local.shape} does not match target dimension {block}")


def embed(local: np.ndarray, targets: Sequence[int], dims: HybridDims | Sequence[int]) -> np.ndarray:
    """Full-register matrix acting as ``local`` on ``targets`` and identity elsewhere."""
    dims = as_dims(dims)
    local = np.asarray(local, dtype=np.complex128)
    _check_targets(local, targets, dims)
    return _apply(local, targets, dims, np.eye(dims.total, dtype=np.complex128))


def apply_gate(local: np.ndarray, targets: Sequence[int], dims: HybridDims | Sequence[int], state: np.ndarray) -> np.ndarray:
    """Apply ``local`` on ``targets`` to a state vector or to every column of a matrix."""
    dims = as_dims(dims)
    local = np.asarray(local, dtype=np.complex128)
    _check_targets(local, targets, dims)
    return _apply(local, targets, dims, np.asarray(state, dtype=np.complex128))


def gate_matrix(spec: GateSpec, dims: HybridDims | Sequence[int]) -> np.ndarray:
    dims = as_dims(dims)
    local = build_local(spec.kind, [dims[t] for t in spec.targets], spec.params)
    return embed(local, spec.targets, dims)


def circuit_unitary(gates: Sequence[GateSpec], dims: HybridDims | Sequence[int]) -> np.ndarray:
    """Product of the gates with ``gates[0]`` applied first."""
    dims = as_dims(dims)
    u = np.eye(dims.total, dtype=np.complex128)
    for spec in gates:
        local = build_local(spec.kind, [dims[t] for t in spec.targets], spec.params)
        u = apply_gate(local, spec.targets, dims, u)
    return u
