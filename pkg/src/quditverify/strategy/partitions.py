"""Test partitions: groups of stabilizer elements measured together.

A :class:`TestPartition` lists subsets of exponent tuples.  Every tuple
``h`` in subset ``i`` is checked by the same local measurement; the
outcome tuple ``j`` passes the check for ``h`` iff
``sum_k h_k j_k / d_k`` is an integer.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Mapping, Sequence

from ..errors import InvalidArgumentError, UnsupportedError
from ..qarith import HybridDims, all_tuples, as_dims, reduce_tuple, residue_condition
from ..states import Family, GraphSpec, StateSpec, family_circuit
from .coloring import ColoringResult, color_graph


@dataclass(frozen=True)
class TestSubset:
    __test__ = False  # not a pytest class

    tuples: tuple[tuple[int, ...], ...]
    description: str = ""

    def __len__(self) -> int:
        return len(self.tuples)

    def passes(self, h: Sequence[int], j: Sequence[int], dims: HybridDims) -> bool:
        """Pass rule of the check for ``h`` on outcome ``j``."""
        return residue_condition(h, j, dims)


@dataclass(frozen=True)
class TestPartition:
    __test__ = False  # not a pytest class

    dims: HybridDims
    subsets: tuple[TestSubset, ...]
    weights: tuple[Fraction | float, ...] = ()
    labels: tuple[str, ...] = field(default=())

    def __post_init__(self):
        dims = as_dims(self.dims)
        object.__setattr__(self, "dims", dims)
        subsets = tuple(
            TestSubset(tuple(reduce_tuple(h, dims) for h in s.tuples), s.description) for s in self.subsets
        )
        object.__setattr__(self, "subsets", subsets)
        if not self.weights:
            object.__setattr__(self, "weights", tuple(Fraction(1, len(subsets)) for _ in subsets))
        if not self.labels:
            object.__setattr__(self, "labels", tuple(str(i) for i in range(len(subsets))))

    @property
    def tau(self) -> int:
        return len(self.subsets)

    def sizes(self) -> list[int]:
        return [len(s) for s in self.subsets]

    def with_weights(self, weights: Sequence[Fraction | float]) -> "TestPartition":
        return TestPartition(self.dims, self.subsets, tuple(weights), self.labels)

    def without(self, h: Sequence[int]) -> "TestPartition":
        """Copy with tuple ``h`` dropped from every subset (empty subsets are removed)."""
        h = reduce_tuple(h, self.dims)
        kept = []
        for subset, label in zip(self.subsets, self.labels):
            remaining = tuple(t for t in subset.tuples if t != h)
            if remaining:
                kept.append((TestSubset(remaining, subset.description), label))
        return TestPartition(self.dims, tuple(s for s, _ in kept), labels=tuple(l for _, l in kept))

    def validate(self) -> None:
        """Raise unless the partition is usable: nonempty subsets, no zero tuple, every generator covered."""
        if not self.subsets:
            raise InvalidArgumentError("a partition needs at least one subset")
        if len(self.weights) != self.tau:
            raise InvalidArgumentError(f"{len(self.weights)} weights for {self.tau} subsets")
        if any(w < 0 for w in self.weights) or abs(float(sum(self.weights)) - 1) > 1e-12:
            raise InvalidArgumentError("weights must be nonnegative and sum to 1")
        zero = (0,) * self.dims.n
        members = set()
        for i, subset in enumerate(self.subsets):
            if not subset.tuples:
                raise InvalidArgumentError(f"subset {i} is empty")
            if zero in subset.tuples:
                raise InvalidArgumentError(f"subset {i} contains the identity tuple")
            members.update(subset.tuples)
        for k in range(self.dims.n):
            unit = tuple(1 if i == k else 0 for i in range(self.dims.n))
            if unit not in members:
                raise InvalidArgumentError(f"generator {k} (tuple {unit}) is not tested by any subset")

    def to_json(self) -> dict[str, Any]:
        return {
            "dims": list(self.dims.dims),
            "subsets": [
                {"label": label, "description": s.description, "tuples": [list(t) for t in s.tuples]}
                for s, label in zip(self.subsets, self.labels)
            ],
            "weights": [_rational_text(w) for w in self.weights],
        }

    @classmethod
    def from_json(cls, data: Mapping[str, Any]) -> "TestPartition":
        try:
            subsets = tuple(
                TestSubset(tuple(tuple(int(x) for x in t) for t in s["tuples"]), s.get("description", ""))
                for s in data["subsets"]
            )
            labels = tuple(str(s.get("label", i)) for i, s in enumerate(data["subsets"]))
            weights = tuple(Fraction(w) for w in data.get("weights", ()))
            return cls(HybridDims(data["dims"]), subsets, weights, labels)
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            if isinstance(exc, InvalidArgumentError):
                raise
            raise InvalidArgumentError(f"bad partition record: {exc}") from exc


def _rational_text(value: Fraction | float) -> str:
    f = value if isinstance(value, Fraction) else Fraction(value).limit_denominator(10**12)
    return f"{f.numerator}/{f.denominator}"


def _unit(n: int, k: int, value: int = 1) -> tuple[int, ...]:
    return tuple(value if i == k else 0 for i in range(n))


def _ghz_base(n: int, d: int) -> TestSubset:
    rest = [(0,) + t for t in all_tuples((d,) * (n - 1)) if any(t)]
    return TestSubset(tuple(rest), "all particles in the computational basis; parity-type rules on particles 1..n-1")


def ghz_partition(n: int, d: int) -> TestPartition:
    """Subset 0 holds every tuple with ``h_0 = 0``; then one singleton per tuple with ``h_0 != 0``.

    Singleton ``(h_0, h')`` sits at position ``1 + (h_0 - 1) d^(n-1) + index(h')``.
    """
    subsets = [_ghz_base(n, d)]
    for h0 in range(1, d):
        for rest in all_tuples((d,) * (n - 1)):
            subsets.append(TestSubset(((h0,) + rest,), "Fourier-type local bases fixed by the exponent tuple"))
    return TestPartition(HybridDims((d,) * n), tuple(subsets))


def ghz_like_partition(n: int, d: int) -> TestPartition:
    """Subset 0 as for GHZ plus the powers of the first generator."""
    first = TestSubset(tuple(_unit(n, 0, h0) for h0 in range(1, d)), "first particle in the rotated basis, rest computational")
    return TestPartition(HybridDims((d,) * n), (_ghz_base(n, d), first))


def _supported_on(vertices: Sequence[int], n: int, values: Sequence[Sequence[int]]) -> list[tuple[int, ...]]:
    out = []
    for choice in itertools.product(*values):
        if not any(choice):
            continue
        h = [0] * n
        for v, x in zip(vertices, choice):
            h[v] = x
        out.append(tuple(h))
    return out


def graph_partition(graph: GraphSpec, d: int, coloring: ColoringResult | None = None) -> TestPartition:
    """Color-class partition for graph-type states.

    Plain graphs and hypergraphs get one subset per color holding every
    nonzero tuple supported on that color.  With edge exponents present,
    each color ``A`` splits further by a vector ``k`` of nonzero residues:
    the subset holds tuples with ``h_v`` in ``{0, k_v}``, and is labelled
    ``(color, sum_t (k_t - 1) (d - 1)^t)``.
    """
    coloring = coloring or color_graph(graph)
    n = graph.n
    subsets, labels = [], []
    for c, members in enumerate(coloring.sets):
        if not graph.has_exponents:
            tuples = _supported_on(members, n, [range(d)] * len(members))
            subsets.append(TestSubset(tuple(tuples), f"color {c}: Fourier basis on {list(members)}, computational elsewhere"))
            labels.append(str(c))
            continue
        blocks = []
        for ks in itertools.product(range(1, d), repeat=len(members)):
            index = sum((k - 1) * (d - 1) ** t for t, k in enumerate(ks))
            tuples = _supported_on(members, n, [(0, k) for k in ks])
            blocks.append((index, tuples, ks))
        for index, tuples, ks in sorted(blocks):
            subsets.append(TestSubset(tuple(tuples), f"color {c}, multipliers {list(ks)}"))
            labels.append(f"{c},{index}")
    return TestPartition(HybridDims((d,) * n), tuple(subsets), labels=tuple(labels))


def family_partition(spec: StateSpec, coloring: ColoringResult | None = None) -> TestPartition:
    """Standard test partition for a supported family."""
    p = spec.params
    family = spec.family
    if family is Family.PSI1:
        return TestPartition(
            HybridDims((3, 2)),
            (
                TestSubset(((1, 0),), "qutrit Fourier test"),
                TestSubset(((2, 0),), "qutrit Fourier test, squared element"),
                TestSubset(((0, 1),), "qubit X test conditioned on the qutrit"),
            ),
        )
    if family is Family.BELL_LIKE:
        return TestPartition(
            HybridDims((2, 2)),
            (
                TestSubset(((0, 1),), "ZZ parity"),
                TestSubset(((1, 0),), "X on particle 1, adaptive basis on particle 0"),
                TestSubset(((1, 1),), "Y on particle 1, adaptive basis on particle 0"),
            ),
        )
    if family is Family.GHZ:
        return ghz_partition(int(p["n"]), int(p["d"]))
    if family is Family.GHZ_LIKE_QUBIT:
        return ghz_like_partition(int(p["n"]), 2)
    if family is Family.GHZ_LIKE_QUDIT:
        return ghz_like_partition(int(p["n"]), int(p["d"]))
    if family is Family.GRAPH:
        family_circuit(spec)  # validates the dimension
        return graph_partition(p["graph"], int(p["d"]), coloring)
    if family is Family.PSI3:
        return TestPartition(
            HybridDims((2, 3, 2, 3)),
            (
                TestSubset(((1, 0, 0, 0),), "generator 0"),
                TestSubset(((0, 1, 0, 0),), "generator 1"),
                TestSubset(((0, 0, 1, 0), (0, 0, 0, 1)), "generators 2 and 3, computational basis"),
            ),
        )
    raise UnsupportedError(f"no standard test partition for family {family.value}")
