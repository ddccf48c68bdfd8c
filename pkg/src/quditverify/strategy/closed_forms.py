"""Closed-form spectral gaps and cost-table multipliers.

These are reference values to compare against the optimizer; none of the
library's computations depend on them.
"""

from __future__ import annotations

from fractions import Fraction

from ..errors import InvalidArgumentError, UnsupportedError
from ..qarith import is_prime
from ..states import Family, GraphSpec, StateSpec
from .coloring import ColoringResult, color_graph


def ghz_nu(n: int, d: int) -> Fraction:
    return Fraction((d - 1) * d ** (n - 1), d**n - 1)


def ghz_like_nu(n: int, d: int) -> Fraction:
    return 1 - Fraction(d ** (n - 1) - 1, 2 * d ** (n - 1) - d ** (n - 2) - 1)


def graph_family_nu(graph: GraphSpec, d: int, coloring: ColoringResult | None = None) -> Fraction:
    """Closed-form gap for graph-type states given a coloring with class sizes ``p_i``.

    Without edge exponents: ``(d-1) / (d chi - sum_i d^(1-p_i))``.
    With exponents: ``1 / sum_i (2^p_i - 1)(d-1) / ((2^p_i - 1)(d-1) - (2^(p_i-1) - 1))``.
    """
    if not is_prime(d):
        raise InvalidArgumentError(f"graph families need a prime dimension, got {d}")
    coloring = coloring or color_graph(graph)
    sizes = coloring.sizes
    if not graph.has_exponents:
        return Fraction(d - 1) / (d * len(sizes) - sum(Fraction(1, d ** (p - 1)) for p in sizes))
    total = sum(
        Fraction((2**p - 1) * (d - 1), (2**p - 1) * (d - 1) - (2 ** (p - 1) - 1)) for p in sizes
    )
    return 1 / total


def multigraph_optimal_nu(coloring: ColoringResult) -> Fraction:
    """Gap reached by the optimizer on the exponent-split partition: ``1 / sum_i (2^p_i - 1) / 2^(p_i - 1)``."""
    return 1 / sum(Fraction(2**p - 1, 2 ** (p - 1)) for p in coloring.sizes)


def reference_nu(spec: StateSpec, coloring: ColoringResult | None = None) -> Fraction:
    p = spec.params
    family = spec.family
    if family is Family.PSI1:
        return Fraction(1, 2)
    if family is Family.BELL_LIKE:
        return Fraction(2, 3)
    if family is Family.GHZ:
        return ghz_nu(int(p["n"]), int(p["d"]))
    if family is Family.GHZ_LIKE_QUBIT:
        return ghz_like_nu(int(p["n"]), 2)
    if family is Family.GHZ_LIKE_QUDIT:
        return ghz_like_nu(int(p["n"]), int(p["d"]))
    if family is Family.GRAPH:
        return graph_family_nu(p["graph"], int(p["d"]), coloring)
    if family is Family.PSI3:
        return Fraction(3, 4)
    raise UnsupportedError(f"no closed form for family {family.value}")


def table_multiplier(spec: StateSpec, coloring: ColoringResult | None = None) -> Fraction:
    """Coefficient of ``c = ln(1/delta) / epsilon`` in the cost-table entry for the family."""
    family = spec.family
    if family is Family.PSI1:
        return Fraction(2)
    if family is Family.BELL_LIKE:
        return Fraction(3, 2)
    if family in (Family.GHZ, Family.GHZ_LIKE_QUBIT, Family.GHZ_LIKE_QUDIT):
        return Fraction(3)
    if family is Family.GRAPH:
        d = int(spec.params["d"])
        chi = (coloring or color_graph(spec.params["graph"])).chromatic_number
        return (1 + Fraction(1, d - 1)) * chi
    if family is Family.PSI3:
        return Fraction(4, 3)
    raise UnsupportedError(f"no table entry for family {family.value}")
