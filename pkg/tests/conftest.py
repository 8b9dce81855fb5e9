import numpy as np
import pytest
from hypothesis import settings, strategies as st

from simplicial_walks.complex_core import VertexWeightedGraph, build_clique_complex
from simplicial_walks.fixtures import named_complexes

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")


@st.composite
def weighted_graphs(draw, min_n=2, max_n=7, weight_range=(0.1, 1.0)):
    n = draw(st.integers(min_n, max_n))
    pairs = [(a, b) for a in range(n) for b in range(a + 1, n)]
    mask = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    weights = draw(
        st.lists(st.floats(*weight_range, allow_nan=False), min_size=n, max_size=n)
    )
    edges = [p for p, keep in zip(pairs, mask) if keep]
    return VertexWeightedGraph.from_edges(n, edges, weights)


@st.composite
def complexes_with_k(draw, min_n=3, max_n=7, need_up=False):
    """A clique complex with at least one edge, plus a dimension 1 <= k <= k_max."""
    g = draw(weighted_graphs(min_n, max_n))
    if not g.edges:
        g = VertexWeightedGraph.from_edges(g.n, [(0, 1)], g.weights)
    X = build_clique_complex(g)
    k = draw(st.integers(1, X.k_max))
    return X, k


@pytest.fixture(scope="session")
def fixtures():
    return named_complexes()


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS, summary_line
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for number in sorted(RESULTS):
            terminalreporter.write_line(summary_line(number))
