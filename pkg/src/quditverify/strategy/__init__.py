"""Test partitions, coefficient tables, weight optimization and sample counts."""

from .closed_forms import (
    ghz_like_nu,
    ghz_nu,
    graph_family_nu,
    multigraph_optimal_nu,
    reference_nu,
    table_multiplier,
)
from .coloring import ColoringResult, color_graph, is_independent_cover
from .partitions import TestPartition, TestSubset, family_partition
from .spectral import (
    LambdaTable,
    OptimalWeights,
    VerificationOperator,
    assemble_omega,
    lambda_coefficients,
    lambda_table,
    n_opt,
    optimize_weights,
)

__all__ = [
    "ColoringResult",
    "LambdaTable",
    "OptimalWeights",
    "TestPartition",
    "TestSubset",
    "VerificationOperator",
    "assemble_omega",
    "color_graph",
    "family_partition",
    "ghz_like_nu",
    "ghz_nu",
    "graph_family_nu",
    "is_independent_cover",
    "lambda_coefficients",
    "lambda_table",
    "multigraph_optimal_nu",
    "n_opt",
    "optimize_weights",
    "reference_nu",
    "table_multiplier",
]
