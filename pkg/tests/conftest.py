import networkx as nx
import pytest

from carpet.graph import carpet_graph


def to_networkx(g):
    """Coordinate-labelled networkx copy of a carpet graph (test oracle)."""
    h = nx.Graph()
    coords = [tuple(c) for c in g.coords.tolist()]
    h.add_nodes_from(coords)
    h.add_edges_from((coords[u], coords[v]) for u, v in g.edges().tolist())
    return h


@pytest.fixture(scope="session")
def nx_levels():
    return {n: to_networkx(carpet_graph(n)) for n in range(1, 6)}


# acceptance verdicts, filled in by test_acceptance and echoed after the run
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[num])
