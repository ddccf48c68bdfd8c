"""End-to-end verification report and the verification-cost table."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

import numpy as np

from .states import BuiltState, Edge, Family, GraphSpec, StateSpec, build
from .strategy import (
    OptimalWeights,
    TestPartition,
    VerificationOperator,
    assemble_omega,
    color_graph,
    family_partition,
    n_opt,
    optimize_weights,
    reference_nu,
    table_multiplier,
)
from .strategy.partitions import _rational_text

SCHEMA = "qudit-verify/1"


def rational_text(value: Fraction | float) -> str:
    return _rational_text(value)


@dataclass(frozen=True)
class VerificationReport:
    state: BuiltState
    partition: TestPartition
    optimum: OptimalWeights
    operator: VerificationOperator
    epsilon: float
    delta: float

    @property
    def nu(self) -> float:
        return self.optimum.nu

    @property
    def n_opt(self) -> tuple[int, int]:
        nu = self.optimum.nu_exact if self.optimum.nu_exact is not None else self.optimum.nu
        return n_opt(nu, self.epsilon, self.delta)

    def spectrum_nu(self) -> float:
        values = self.operator.spectrum()
        return 1.0 - float(values[1]) if values.size > 1 else 1.0

    def to_json(self, spectrum_head: int = 8) -> dict[str, Any]:
        exact, bound = self.n_opt
        values = self.operator.spectrum()
        weights = self.optimum.weights_exact or tuple(self.optimum.weights)
        return {
            "schema": SCHEMA,
            "state": self.state.spec.to_json(),
            "dims": list(self.state.dims.dims),
            "partition": {
                "tau": self.partition.tau,
                "sizes": self.partition.sizes(),
                "labels": list(self.partition.labels),
            },
            "weights": [rational_text(w) for w in weights],
            "weights_float": [float(w) for w in self.optimum.weights],
            "beta": self.optimum.beta,
            "nu": self.optimum.nu,
            "beta_exact": None if self.optimum.beta_exact is None else rational_text(self.optimum.beta_exact),
            "nu_exact": None if self.optimum.nu_exact is None else rational_text(self.optimum.nu_exact),
            "nu_spectrum": self.spectrum_nu(),
            "epsilon": self.epsilon,
            "delta": self.delta,
            "n_opt": {"exact": exact, "bound": bound},
            "spectrum_head": [float(v) for v in values[:spectrum_head]],
        }


def verify(spec: StateSpec, epsilon: float = 0.01, delta: float = 0.05, partition: TestPartition | None = None) -> VerificationReport:
    state = build(spec)
    partition = partition or family_partition(spec)
    partition.validate()
    optimum = optimize_weights(partition)
    weighted = partition.with_weights(optimum.weights_exact or tuple(optimum.weights))
    operator = assemble_omega(state.unitary, weighted)
    n_opt(optimum.nu if optimum.nu > 0 else 1.0, epsilon, delta)  # validates epsilon and delta early
    return VerificationReport(state, weighted, optimum, operator, epsilon, delta)


def _cycle(n: int) -> GraphSpec:
    return GraphSpec.from_pairs(n, [(i, (i + 1) % n) for i in range(n)])


def table_rows() -> list[tuple[str, StateSpec, str]]:
    """Families shown in the verification-cost table; the last field says how the value relates to the table."""
    rows: list[tuple[str, StateSpec, str]] = [
        ("psi1", StateSpec.psi1(), "equal"),
        ("psi2 (theta=pi/5)", StateSpec.bell_like(math.pi / 5), "equal"),
        ("GHZ n=3 d=2", StateSpec.ghz(3, 2), "below"),
        ("GHZ n=3 d=3", StateSpec.ghz(3, 3), "below"),
        ("GHZ-like n=3 d=2", StateSpec.ghz_like_qubit(3, math.pi / 5), "below"),
        ("GHZ-like n=3 d=3", StateSpec.ghz_like_qudit(3, 3, [math.pi / 5, math.pi / 3]), "below"),
    ]
    graphs = {
        "P3": GraphSpec.from_pairs(3, [(0, 1), (1, 2)]),
        "triangle": _cycle(3),
        "C5": _cycle(5),
    }
    for name, graph in graphs.items():
        for d in (2, 3):
            rows.append((f"graph {name} d={d}", StateSpec.graph(graph, d), "strictly below"))
    hyper = GraphSpec(3, (Edge((0, 1, 2)),))
    rows.append(("hypergraph K3^(3) d=3", StateSpec.graph(hyper, 3), "strictly below"))
    multi = GraphSpec(3, (Edge((0, 1), 1, (2, 1)), Edge((1, 2), 1, (1, 1))))
    for d in (2, 3):
        rows.append((f"multigraph P3 d={d}", StateSpec.graph(multi, d), "strictly below"))
    return rows


@dataclass(frozen=True)
class TableRow:
    name: str
    family: str
    table_entry: int
    multiplier: Fraction
    closed_form_n: int
    computed_n: int
    computed_exact_n: int
    nu: float
    nu_exact: Fraction | None
    nu_reference: Fraction
    relation: str

    @property
    def ok(self) -> bool:
        if self.relation == "equal":
            return self.computed_n == self.table_entry
        if self.relation == "below":
            return self.computed_n <= self.table_entry
        return self.computed_n < self.table_entry

    def to_json(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "family": self.family,
            "table_entry": self.table_entry,
            "table_multiplier": rational_text(self.multiplier),
            "closed_form_n": self.closed_form_n,
            "computed_n": self.computed_n,
            "computed_exact_n": self.computed_exact_n,
            "nu": self.nu,
            "nu_exact": None if self.nu_exact is None else rational_text(self.nu_exact),
            "nu_reference": rational_text(self.nu_reference),
            "relation": self.relation,
            "ok": self.ok,
        }


def table1(epsilon: float = 0.01, delta: float = 0.05) -> list[TableRow]:
    c = math.log(1 / delta) / epsilon
    rows = []
    for name, spec, relation in table_rows():
        coloring = color_graph(spec.params["graph"]) if spec.family is Family.GRAPH else None
        partition = family_partition(spec, coloring)
        optimum = optimize_weights(partition)
        nu = optimum.nu_exact if optimum.nu_exact is not None else optimum.nu
        exact, bound = n_opt(nu, epsilon, delta)
        reference = reference_nu(spec, coloring)
        multiplier = table_multiplier(spec, coloring)
        rows.append(
            TableRow(
                name=name,
                family=spec.family.value,
                table_entry=math.ceil(float(multiplier) * c),
                multiplier=multiplier,
                closed_form_n=n_opt(reference, epsilon, delta)[1],
                computed_n=bound,
                computed_exact_n=exact,
                nu=optimum.nu,
                nu_exact=optimum.nu_exact,
                nu_reference=reference,
                relation=relation,
            )
        )
    return rows


def spectrum_matches_lambdas(operator: VerificationOperator, tol: float = 1e-9) -> bool:
    values = np.sort(operator.spectrum())
    return bool(np.max(np.abs(values - np.sort(operator.lambdas))) <= tol)
