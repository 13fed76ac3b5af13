"""Fixtures shared by the graph and deduction tests."""

from pathlib import Path

import pytest

from data_processing.graph_text import read_graph, read_rules
from data_processing.spec_text import read_deduction_rules, read_model, read_spec
from graphs.graph_core import Graph

FIXTURES = Path(__file__).parent / "fixtures"
GOLDEN = FIXTURES / "golden"

# depth used by every deduction test; the worked examples need at most 2
DEPTH = 3


@pytest.fixture
def fixtures():
    """Directory holding the text fixtures."""
    return FIXTURES


@pytest.fixture
def cycle3():
    """Directed three-cycle a -> b -> c -> a."""
    return read_graph(FIXTURES / "cycle3.graph")


@pytest.fixture
def loop():
    """A single node carrying a loop."""
    return read_graph(FIXTURES / "loop.graph")


@pytest.fixture
def del_edge():
    return read_rules(FIXTURES / "del_edge.rules")[0]


@pytest.fixture
def del_node():
    return read_rules(FIXTURES / "del_node.rules")[0]


@pytest.fixture
def edge_graph():
    """Two nodes joined by one edge."""
    return Graph.build({"x": "", "y": ""}, {"f": ("x", "y")})


@pytest.fixture
def nat():
    """Natural numbers with 0, s and +."""
    return read_spec(FIXTURES / "nat.eqs")


@pytest.fixture
def nat_h():
    """nat plus the two lemmas of the transitivity example."""
    return read_spec(FIXTURES / "nat_h.eqs")


@pytest.fixture
def mod2():
    """Naturals modulo 2, a model of nat."""
    return read_model(FIXTURES / "mod2.model")


@pytest.fixture(scope="session")
def nat_rules():
    """plus_succ, cong_zero_plus, transitivity and symmetry, all in span form."""
    return read_deduction_rules(FIXTURES / "nat.rules", DEPTH)
