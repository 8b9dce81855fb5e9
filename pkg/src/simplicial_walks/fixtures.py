"""Small named graphs used by tests, scripts and the CLI."""

from __future__ import annotations

from itertools import combinations

import numpy as np

from .complex_core import CliqueComplex, VertexWeightedGraph, build_clique_complex


def complete_graph(n: int, weights=None) -> VertexWeightedGraph:
    return VertexWeightedGraph.from_edges(n, combinations(range(n), 2), weights)


def cycle_graph(n: int, weights=None) -> VertexWeightedGraph:
    return VertexWeightedGraph.from_edges(n, [(i, (i + 1) % n) for i in range(n)], weights)


def add_edges(graph: VertexWeightedGraph, edges) -> VertexWeightedGraph:
    return VertexWeightedGraph.from_edges(graph.n, list(graph.edges) + list(edges), graph.weights)


def disjoint_union(a: VertexWeightedGraph, b: VertexWeightedGraph) -> VertexWeightedGraph:
    shifted = [(u + a.n, v + a.n) for u, v in b.edges]
    weights = np.concatenate([a.weights, b.weights])
    return VertexWeightedGraph.from_edges(a.n + b.n, list(a.edges) + shifted, weights)


def random_graph(n: int, p: float, rng: np.random.Generator, weight_range=(0.1, 1.0)) -> VertexWeightedGraph:
    edges = [e for e in combinations(range(n), 2) if rng.random() < p]
    weights = rng.uniform(*weight_range, size=n)
    return VertexWeightedGraph.from_edges(n, edges, weights)


def tetrahedron_boundary() -> CliqueComplex:
    """Hollow tetrahedron: the clique complex of K4 truncated at dimension 2."""
    return build_clique_complex(complete_graph(4), k_max=2)


def named_complexes() -> dict[str, CliqueComplex]:
    """Fixture suite shared by the test modules."""
    return {
        "K3": build_clique_complex(complete_graph(3)),
        "C4": build_clique_complex(cycle_graph(4)),
        "C5": build_clique_complex(cycle_graph(5)),
        "K4": build_clique_complex(complete_graph(4)),
        "tetra": tetrahedron_boundary(),
        "C4+K3": build_clique_complex(disjoint_union(cycle_graph(4), complete_graph(3))),
        "C5+chord": build_clique_complex(add_edges(cycle_graph(5), [(0, 2)])),
        "K3w": build_clique_complex(complete_graph(3, [2.0, 1.0, 0.5])),
        "C4w": build_clique_complex(cycle_graph(4, [0.3, 1.0, 0.7, 0.5])),
        "K4w": build_clique_complex(complete_graph(4, [0.9, 0.4, 1.0, 0.6])),
    }
