import math

import pytest

from quditverify.states import Edge, GraphSpec, StateSpec

ACCEPTANCE_LINES: list[str] = []


def family_specs() -> list[tuple[str, StateSpec]]:
    """One representative per supported family, small enough for dense checks."""
    return [
        ("psi1", StateSpec.psi1()),
        ("bell_like", StateSpec.bell_like(0.4)),
        ("ghz_3_2", StateSpec.ghz(3, 2)),
        ("ghz_3_3", StateSpec.ghz(3, 3)),
        ("ghz_2_5", StateSpec.ghz(2, 5)),
        ("ghz_like_qubit_3", StateSpec.ghz_like_qubit(3, 0.3)),
        ("ghz_like_qudit_3_3", StateSpec.ghz_like_qudit(3, 3, [0.5, 0.9])),
        ("graph_p3_3", StateSpec.graph(GraphSpec.from_pairs(3, [(0, 1), (1, 2)], weight=2), 3)),
        ("hypergraph_3", StateSpec.graph(GraphSpec(3, (Edge((0, 1, 2)), Edge((0, 1), 2))), 3)),
        ("multigraph_3", StateSpec.graph(GraphSpec(3, (Edge((0, 1), 1, (2, 1)), Edge((1, 2), 2, (1, 2)))), 3)),
        ("multihypergraph_3", StateSpec.graph(GraphSpec(3, (Edge((0, 1, 2), 1, (2, 1, 2)),)), 3)),
        ("psi3", StateSpec.psi3()),
    ]


@pytest.fixture(params=family_specs(), ids=lambda p: p[0])
def family(request):
    return request.param[1]


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def theta_grid():
    return [math.pi / 6, math.pi / 4, math.pi / 3]
