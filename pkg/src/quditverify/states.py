"""Builders for the supported target-state families.

Every builder returns a :class:`BuiltState` holding the dimensions, the
preparation unitary ``U`` and the state ``U|0...0>``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Any, Mapping, Sequence

import numpy as np

from .errors import InvalidArgumentError
from .gates import GateKind, GateSpec, circuit_unitary
from .qarith import HybridDims, as_dims, index_to_tuple, is_prime, tuple_to_index
from .qlinalg import is_unitary


@dataclass(frozen=True)
class Edge:
    """A (hyper)edge with weight ``m`` and optional per-vertex exponents."""

    vertices: tuple[int, ...]
    weight: int = 1
    exponents: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.exponents is not None:
            pairs = sorted(zip(self.vertices, self.exponents))
            object.__setattr__(self, "vertices", tuple(v for v, _ in pairs))
            object.__setattr__(self, "exponents", tuple(int(s) for _, s in pairs))
            if len(self.exponents) != len(self.vertices):
                raise InvalidArgumentError("one exponent per edge vertex is required")
        else:
            object.__setattr__(self, "vertices", tuple(sorted(int(v) for v in self.vertices)))
        if len(self.vertices) < 2 or len(set(self.vertices)) != len(self.vertices):
            raise InvalidArgumentError(f"an edge needs at least two distinct vertices, got {self.vertices}")

    def to_json(self) -> dict:
        record: dict[str, Any] = {"vertices": list(self.vertices), "weight": self.weight}
        if self.exponents is not None:
            record["exponents"] = list(self.exponents)
        return record


@dataclass(frozen=True)
class GraphSpec:
    n: int
    edges: tuple[Edge, ...] = ()

    def __post_init__(self):
        if self.n < 1:
            raise InvalidArgumentError("a graph needs at least one vertex")
        object.__setattr__(self, "edges", tuple(self.edges))
        for edge in self.edges:
            if max(edge.vertices) >= self.n or min(edge.vertices) < 0:
                raise InvalidArgumentError(f"edge {edge.vertices} refers to a vertex outside 0..{self.n - 1}")

    @property
    def has_exponents(self) -> bool:
        return any(e.exponents is not None for e in self.edges)

    @property
    def is_hyper(self) -> bool:
        return any(len(e.vertices) > 2 for e in self.edges)

    @property
    def kind(self) -> str:
        base = "hypergraph" if self.is_hyper else "graph"
        return "multi" + base if self.has_exponents else base

    def adjacency(self) -> list[set[int]]:
        """Vertices are adjacent when they share any edge."""
        neighbours: list[set[int]] = [set() for _ in range(self.n)]
        for edge in self.edges:
            for v in edge.vertices:
                neighbours[v].update(u for u in edge.vertices if u != v)
        return neighbours

    def to_json(self) -> dict:
        return {"n": self.n, "edges": [e.to_json() for e in self.edges]}

    @classmethod
    def from_json(cls, data: Mapping[str, Any]) -> "GraphSpec":
        try:
            edges = []
            for record in data.get("edges", []):
                exponents = record.get("exponents")
                edges.append(
                    Edge(
                        tuple(int(v) for v in record["vertices"]),
                        int(record.get("weight", 1)),
                        None if exponents is None else tuple(int(s) for s in exponents),
                    )
                )
            return cls(int(data["n"]), tuple(edges))
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, InvalidArgumentError):
                raise
            raise InvalidArgumentError(f"bad graph record: {exc}") from exc

    @classmethod
    def from_pairs(cls, n: int, pairs: Sequence[Sequence[int]], weight: int = 1) -> "GraphSpec":
        return cls(n, tuple(Edge(tuple(p), weight) for p in pairs))


class Family(str, enum.Enum):
    PSI1 = "psi1"
    BELL_LIKE = "bell_like"
    GHZ = "ghz"
    GHZ_LIKE_QUBIT = "ghz_like_qubit"
    GHZ_LIKE_QUDIT = "ghz_like_qudit"
    GRAPH = "graph"
    PSI3 = "psi3"
    CUSTOM = "custom"


@dataclass(frozen=True)
class StateSpec:
    """Family identifier plus the parameters that family needs."""

    family: Family
    params: Mapping[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "family", Family(self.family))

    # convenience constructors

    @classmethod
    def psi1(cls) -> "StateSpec":
        return cls(Family.PSI1)

    @classmethod
    def bell_like(cls, theta: float) -> "StateSpec":
        return cls(Family.BELL_LIKE, {"theta": float(theta)})

    @classmethod
    def ghz(cls, n: int, d: int) -> "StateSpec":
        return cls(Family.GHZ, {"n": int(n), "d": int(d)})

    @classmethod
    def ghz_like_qubit(cls, n: int, theta: float) -> "StateSpec":
        return cls(Family.GHZ_LIKE_QUBIT, {"n": int(n), "theta": float(theta)})

    @classmethod
    def ghz_like_qudit(cls, n: int, d: int, thetas: Sequence[float]) -> "StateSpec":
        return cls(Family.GHZ_LIKE_QUDIT, {"n": int(n), "d": int(d), "thetas": [float(t) for t in thetas]})

    @classmethod
    def graph(cls, graph: GraphSpec, d: int) -> "StateSpec":
        return cls(Family.GRAPH, {"graph": graph, "d": int(d)})

    @classmethod
    def psi3(cls) -> "StateSpec":
        return cls(Family.PSI3)

    @classmethod
    def custom(cls, dims: Sequence[int], gates: Sequence[GateSpec]) -> "StateSpec":
        return cls(Family.CUSTOM, {"dims": [int(d) for d in dims], "gates": list(gates)})

    def to_json(self) -> dict:
        out: dict[str, Any] = {"family": self.family.value}
        for key, value in self.params.items():
            if isinstance(value, GraphSpec):
                value = value.to_json()
            elif key == "gates":
                value = [g.to_json() for g in value]
            out[key] = value
        return out

    @classmethod
    def from_json(cls, data: Mapping[str, Any]) -> "StateSpec":
        if not isinstance(data, Mapping) or "family" not in data:
            raise InvalidArgumentError("state spec needs a 'family' field")
        try:
            family = Family(data["family"])
        except ValueError as exc:
            raise InvalidArgumentError(f"unknown family {data['family']!r}") from exc
        required = {
            Family.BELL_LIKE: ("theta",),
            Family.GHZ: ("n", "d"),
            Family.GHZ_LIKE_QUBIT: ("n", "theta"),
            Family.GHZ_LIKE_QUDIT: ("n", "d", "thetas"),
            Family.GRAPH: ("graph", "d"),
            Family.CUSTOM: ("dims", "gates"),
        }.get(family, ())
        missing = [k for k in required if k not in data]
        if missing:
            raise InvalidArgumentError(f"family {family.value} is missing {missing}")
        try:
            if family is Family.PSI1:
                return cls.psi1()
            if family is Family.PSI3:
                return cls.psi3()
            if family is Family.BELL_LIKE:
                return cls.bell_like(data["theta"])
            if family is Family.GHZ:
                return cls.ghz(data["n"], data["d"])
            if family is Family.GHZ_LIKE_QUBIT:
                return cls.ghz_like_qubit(data["n"], data["theta"])
            if family is Family.GHZ_LIKE_QUDIT:
                return cls.ghz_like_qudit(data["n"], data["d"], data["thetas"])
            if family is Family.GRAPH:
                return cls.graph(GraphSpec.from_json(data["graph"]), data["d"])
            return cls.custom(data["dims"], [GateSpec.from_json(g) for g in data["gates"]])
        except (TypeError, ValueError) as exc:
            if isinstance(exc, InvalidArgumentError):
                raise
            raise InvalidArgumentError(f"bad parameters for {family.value}: {exc}") from exc


@dataclass(frozen=True)
class BuiltState:
    spec: StateSpec
    dims: HybridDims
    unitary: np.ndarray
    psi: np.ndarray
    circuit: tuple[GateSpec, ...] = ()

    def density(self) -> np.ndarray:
        return np.outer(self.psi, np.conj(self.psi))


def _require_n(n: int, minimum: int = 2) -> None:
    if n < minimum:
        raise InvalidArgumentError(f"need at least {minimum} particles, got {n}")


def _ghz_circuit(n: int, first: GateSpec, d: int) -> list[GateSpec]:
    kind = GateKind.CNOT if d == 2 else GateKind.CSUM
    return [first] + [GateSpec(kind, (0, j)) for j in range(1, n)]


def family_circuit(spec: StateSpec) -> tuple[HybridDims, list[GateSpec]]:
    """Dimensions and gate list (first gate applied first) preparing the family state."""
    p = spec.params
    family = spec.family
    if family is Family.PSI1:
        return HybridDims((3, 2)), [
            GateSpec(GateKind.QFT, (0,)),
            GateSpec(GateKind.HADAMARD, (1,)),
            GateSpec(GateKind.HYBRID_CZ, (0, 1)),
        ]
    if family is Family.BELL_LIKE:
        theta = float(p["theta"])
        return HybridDims((2, 2)), [
            GateSpec(GateKind.RY, (0,), {"angle": math.pi - 2 * theta}),
            GateSpec(GateKind.CNOT, (0, 1)),
        ]
    if family is Family.GHZ:
        n, d = int(p["n"]), int(p["d"])
        _require_n(n)
        first = GateSpec(GateKind.HADAMARD if d == 2 else GateKind.QFT, (0,))
        return HybridDims((d,) * n), _ghz_circuit(n, first, d)
    if family is Family.GHZ_LIKE_QUBIT:
        n, theta = int(p["n"]), float(p["theta"])
        _require_n(n)
        if not 0 < theta < math.pi / 2:
            raise InvalidArgumentError(f"theta must lie in (0, pi/2), got {theta}")
        first = GateSpec(GateKind.RY, (0,), {"angle": math.pi - 2 * theta})
        return HybridDims((2,) * n), _ghz_circuit(n, first, 2)
    if family is Family.GHZ_LIKE_QUDIT:
        n, d = int(p["n"]), int(p["d"])
        _require_n(n)
        thetas = [float(t) for t in p["thetas"]]
        if len(thetas) != d - 1:
            raise InvalidArgumentError(f"need {d - 1} Givens angles for d={d}, got {len(thetas)}")
        first = GateSpec(GateKind.GIVENS_CHAIN, (0,), {"thetas": thetas})
        return HybridDims((d,) * n), _ghz_circuit(n, first, d)
    if family is Family.GRAPH:
        graph, d = p["graph"], int(p["d"])
        if not is_prime(d):
            raise InvalidArgumentError(f"graph families need a prime dimension, got {d}")
        gates = [GateSpec(GateKind.QFT, (v,)) for v in range(graph.n)]
        for edge in graph.edges:
            if edge.weight % d == 0:
                raise InvalidArgumentError(f"edge weight {edge.weight} vanishes mod {d}")
            params: dict[str, Any] = {"weight": edge.weight % d}
            if edge.exponents is not None:
                params["exponents"] = list(edge.exponents)
                kind = GateKind.MULTI_CZ if len(edge.vertices) == 2 else GateKind.MULTI_HYPER_CZ
            else:
                kind = GateKind.CZ_WEIGHTED if len(edge.vertices) == 2 else GateKind.HYPER_CZ
            gates.append(GateSpec(kind, edge.vertices, params))
        return HybridDims((d,) * graph.n), gates
    if family is Family.PSI3:
        return HybridDims((2, 3, 2, 3)), [
            GateSpec(GateKind.HADAMARD, (0,)),
            GateSpec(GateKind.QFT, (1,)),
            GateSpec(GateKind.HYBRID_CZ, (1, 0)),
            GateSpec(GateKind.CNOT, (0, 2)),
            GateSpec(GateKind.CSUM, (1, 3)),
        ]
    if family is Family.CUSTOM:
        return HybridDims(p["dims"]), list(p["gates"])
    raise InvalidArgumentError(f"unknown family {family}")


def build(spec: StateSpec) -> BuiltState:
    dims, circuit = family_circuit(spec)
    unitary = circuit_unitary(circuit, dims)
    if not is_unitary(unitary, 1e-10):
        raise InvalidArgumentError("preparation circuit is not unitary")
    psi = unitary[:, 0].copy()
    return BuiltState(spec, dims, unitary, psi, tuple(circuit))


def build_psi3() -> BuiltState:
    return build(StateSpec.psi3())


@dataclass(frozen=True)
class CompositeIndexMap:
    """Bijection between labels of a composite register and its prime-split register.

    Each particle of dimension ``d = p_1 p_2 ...`` (ascending primes,
    repeated by multiplicity) becomes consecutive prime particles whose
    mixed-radix digits spell the original label.
    """

    composite: HybridDims
    split: HybridDims

    def split_label(self, label: Sequence[int]) -> tuple[int, ...]:
        digits: list[int] = []
        for k, primes in zip(label, self.composite.splits):
            digits.extend(index_to_tuple(int(k), primes))
        return tuple(digits)

    def join_label(self, digits: Sequence[int]) -> tuple[int, ...]:
        if len(digits) != self.split.n:
            raise InvalidArgumentError(f"expected {self.split.n} digits, got {len(digits)}")
        label, pos = [], 0
        for primes in self.composite.splits:
            label.append(tuple_to_index(digits[pos : pos + len(primes)], primes))
            pos += len(primes)
        return tuple(label)

    def index_permutation(self) -> np.ndarray:
        """``perm[i]`` is the split-register index of composite global index ``i``."""
        return np.array(
            [
                tuple_to_index(self.split_label(index_to_tuple(i, self.composite)), self.split)
                for i in range(self.composite.total)
            ],
            dtype=np.int64,
        )

    def push_vector(self, vector: np.ndarray) -> np.ndarray:
        out = np.zeros_like(vector)
        out[self.index_permutation()] = vector
        return out


def composite_index_map(dims: HybridDims | Sequence[int]) -> CompositeIndexMap:
    dims = as_dims(dims)
    return CompositeIndexMap(dims, dims.prime_dims())
