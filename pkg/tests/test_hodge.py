import numpy as np
import pytest
from hypothesis import given, strategies as st

from simplicial_walks.complex_core import VertexWeightedGraph, build_clique_complex
from simplicial_walks.errors import NoNonzeroEigenvalueError, PreconditionError
from simplicial_walks.fixtures import complete_graph, cycle_graph, add_edges
from simplicial_walks.hodge import (
    betti_exact,
    boundary_matrix,
    exact_target_projector,
    hodge_projectors_exact,
    laplacians,
    persistent_betti_exact,
    spectral_summary,
)

from conftest import complexes_with_k, weighted_graphs


def test_k3_boundary_of_triangle():
    X = build_clique_complex(complete_graph(3))
    D = boundary_matrix(X, 2).entries[:, 0]
    # basis [01], [02], [12]
    assert np.allclose(D, [1, -1, 1])
    assert np.allclose(boundary_matrix(X, 1).entries @ boundary_matrix(X, 2).entries, 0)


def test_weighted_down_diagonal():
    X = build_clique_complex(complete_graph(3, [2, 1, 1]))
    assert laplacians(X, 1).down[0, 0] == pytest.approx(5.0)


def test_k3_laplacian_is_3i():
    assert np.allclose(laplacians(build_clique_complex(complete_graph(3)), 1).full, 3 * np.eye(3))


def test_c4_spectrum():
    L = laplacians(build_clique_complex(cycle_graph(4)), 1).full
    assert np.allclose(np.linalg.eigvalsh(L), [0, 2, 2, 4])
    s = spectral_summary(L)
    assert s.lambda_min_nonzero == pytest.approx(2) and s.kernel_dim == 1


def test_spectral_summary_errors():
    with pytest.raises(NoNonzeroEigenvalueError):
        spectral_summary(np.zeros((3, 3)))
    with pytest.raises(PreconditionError):
        spectral_summary(np.array([[0.0, 1.0], [0.0, 0.0]]))


def test_c4_harmonic_projector_is_cycle():
    X = build_clique_complex(cycle_graph(4))
    _, H, _ = hodge_projectors_exact(X, 1)
    c = np.array([1, -1, 1, 1]) / 2  # basis [01], [03], [12], [23]
    assert np.allclose(H, np.outer(c, c))


def test_k3_harmonic_projector_is_zero():
    _, H, _ = hodge_projectors_exact(build_clique_complex(complete_graph(3)), 1)
    assert np.allclose(H, 0)


@pytest.mark.parametrize(
    "name,k,beta",
    [("C4", 1, 1), ("K3", 1, 0), ("K4", 1, 0), ("tetra", 1, 0), ("tetra", 2, 1), ("C4+K3", 1, 1), ("C5+chord", 1, 1), ("C5", 1, 1)],
)
def test_fixture_betti(fixtures, name, k, beta):
    assert betti_exact(fixtures[name], k) == beta


def test_two_disjoint_edges_components():
    g = VertexWeightedGraph.from_edges(4, [(0, 1), (2, 3)])
    assert betti_exact(build_clique_complex(g), 0) == 2


def test_persistent_examples(fixtures):
    assert persistent_betti_exact(fixtures["C4"], fixtures["K4"], 1) == 0
    assert persistent_betti_exact(fixtures["C4"], fixtures["C4"], 1) == 1
    assert persistent_betti_exact(fixtures["C5"], fixtures["C5+chord"], 1) == 1


def test_persistent_rejects_non_nested(fixtures):
    with pytest.raises(PreconditionError):
        persistent_betti_exact(fixtures["K4"], fixtures["C4"], 1)


def test_unknown_target():
    with pytest.raises(PreconditionError):
        exact_target_projector(build_clique_complex(complete_graph(3)), 1, "nope")


@given(weighted_graphs(max_n=7))
def test_boundary_squares_to_zero(g):
    X = build_clique_complex(g)
    for k in range(1, X.k_max + 1):
        prod = boundary_matrix(X, k).entries @ boundary_matrix(X, k + 1).entries
        assert np.max(np.abs(prod), initial=0) <= 1e-12


@given(weighted_graphs(max_n=7))
def test_boundary_columns(g):
    X = build_clique_complex(g)
    for k in range(1, X.k_max + 1):
        D = boundary_matrix(X, k).entries
        assert np.all(np.count_nonzero(D, axis=0) == k + 1)


@given(complexes_with_k())
def test_laplacians_psd_and_additive(Xk):
    X, k = Xk
    L = laplacians(X, k)  # raises if the two constructions disagree
    assert np.allclose(L.full, L.up + L.down, atol=0)
    for M in (L.up, L.down, L.full):
        assert np.allclose(M, M.T)
        assert np.linalg.eigvalsh(M).min() >= -1e-10


@given(complexes_with_k(), st.data())
def test_orientation_flip_keeps_spectrum(Xk, data):
    X, k = Xk
    L = laplacians(X, k).full
    signs = np.array(data.draw(st.lists(st.sampled_from([-1.0, 1.0]), min_size=X.count(k), max_size=X.count(k))))
    flipped = signs[:, None] * L * signs[None, :]
    assert np.allclose(np.linalg.eigvalsh(L), np.linalg.eigvalsh(flipped), atol=1e-9)


@given(complexes_with_k())
def test_hodge_decomposition(Xk):
    X, k = Xk
    projs = hodge_projectors_exact(X, k)
    m = X.count(k)
    assert np.allclose(sum(projs), np.eye(m), atol=1e-8)
    for i, A in enumerate(projs):
        assert np.allclose(A @ A, A, atol=1e-8)
        for B in projs[i + 1:]:
            assert np.allclose(A @ B, 0, atol=1e-8)


@given(complexes_with_k())
def test_nullity_equals_rank_formula(Xk):
    X, k = Xk
    betti_exact(X, k)  # raises on mismatch


@given(weighted_graphs(min_n=4, max_n=6), st.data())
def test_persistent_betti_bounded_by_betti(g, data):
    pairs = [(a, b) for a in range(g.n) for b in range(a + 1, g.n) if not g.adjacency[a, b]]
    extra = data.draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    gj = add_edges(g, extra)
    Xi, Xj = build_clique_complex(g, k_max=1), build_clique_complex(gj, k_max=2)
    Xi_full = build_clique_complex(g, k_max=2)
    beta_ij = persistent_betti_exact(Xi, Xj, 1)
    assert 0 <= beta_ij <= betti_exact(Xi_full, 1)
    assert persistent_betti_exact(Xi_full, Xi_full, 1) == betti_exact(Xi_full, 1)
