"""Exact chain-level linear algebra: boundaries, Laplacians, Hodge projectors, Betti numbers.

Everything here is dense and exact up to floating point. These routines are
the reference oracles that the walk and polynomial machinery is tested
against.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import null_space, orth

from .complex_core import CliqueComplex, Relation, adjacency, encode_label, exchange_neighbors
from .errors import NoNonzeroEigenvalueError, PreconditionError

ZERO_TOL = 1e-9


@dataclass(frozen=True)
class BoundaryMatrix:
    k: int
    entries: np.ndarray


@dataclass(frozen=True)
class LaplacianTriple:
    k: int
    up: np.ndarray
    down: np.ndarray
    full: np.ndarray


@dataclass(frozen=True)
class SpectralSummary:
    eigenvalues: np.ndarray
    lambda_min_nonzero: float
    kernel_dim: int


def boundary_matrix(X: CliqueComplex, k: int) -> BoundaryMatrix:
    """Weighted boundary from k-chains to (k-1)-chains.

    Column ``sigma`` has ``(-1)**j * w(v_j)`` in the row of the face that
    drops ``v_j``. ``k = 0`` and ``k = k_max + 1`` give empty-sided matrices.
    """
    if not 0 <= k <= X.k_max + 1:
        raise PreconditionError(f"k={k} outside [0, {X.k_max + 1}]")
    cols = X.basis(k)
    rows = X.basis(k - 1) if k >= 1 else ()
    D = np.zeros((len(rows), len(cols)))
    if k >= 1:
        w = X.weights
        for c, simplex in enumerate(cols):
            for j, v in enumerate(simplex):
                face = simplex[:j] + simplex[j + 1:]
                D[X.index_of(face, k - 1), c] = (-1) ** j * w[v]
    return BoundaryMatrix(k, D)


def _combinatorial_laplacians(X: CliqueComplex, k: int):
    """Entrywise Laplacians built from adjacency relations and weights."""
    basis = X.basis(k)
    m = len(basis)
    w = X.weights
    n = X.n
    up = np.zeros((m, m))
    down = np.zeros((m, m))
    full = np.zeros((m, m))
    for a, sigma in enumerate(basis):
        inside = set(sigma)
        outside = [u for u in range(n) if u not in inside]
        up_vertices = [u for u in outside if X.contains(sigma + (u,))]
        up[a, a] = sum(w[u] ** 2 for u in up_vertices)
        down[a, a] = sum(w[v] ** 2 for v in sigma) if k >= 1 else 0.0
        full[a, a] = up[a, a] + down[a, a]
        lab_a = encode_label(sigma, n)
        for v_out, u_in, tau in exchange_neighbors(X, sigma):
            b = X.index_of(tau, k)
            verdict = adjacency(X, lab_a, encode_label(tau, n))
            weight = w[v_out] * w[u_in]
            if verdict.up is not Relation.NONE:
                up[a, b] = weight if verdict.up is Relation.SIMILAR else -weight
                if k == 0:
                    full[a, b] = up[a, b]
            if verdict.down is not Relation.NONE:
                down[a, b] = weight if verdict.down is Relation.SIMILAR else -weight
                if verdict.up is Relation.NONE:
                    full[a, b] = down[a, b]
    return up, down, full


def laplacians(X: CliqueComplex, k: int, check_tol: float = 1e-12) -> LaplacianTriple:
    """Up, down and full weighted Laplacians at dimension ``k``.

    The product forms ``D_{k+1} D_{k+1}^T`` and ``D_k^T D_k`` are compared
    entrywise against the combinatorial forms; a mismatch above
    ``check_tol`` raises ``AssertionError``.
    """
    if not 0 <= k <= X.k_max:
        raise PreconditionError(f"k={k} outside [0, {X.k_max}]")
    d_up = boundary_matrix(X, k + 1).entries
    d_down = boundary_matrix(X, k).entries
    up = d_up @ d_up.T
    down = d_down.T @ d_down if k >= 1 else np.zeros_like(up)
    full = up + down
    c_up, c_down, c_full = _combinatorial_laplacians(X, k)
    for name, a, b in (("up", up, c_up), ("down", down, c_down), ("full", full, c_full)):
        err = np.max(np.abs(a - b), initial=0.0)
        if err > check_tol:
            raise AssertionError(f"{name} Laplacian forms disagree by {err:.3e}")
    return LaplacianTriple(k, up, down, full)


def spectral_summary(M: np.ndarray, zero_tol: float = ZERO_TOL) -> SpectralSummary:
    M = np.asarray(M, dtype=float)
    if M.shape[0] != M.shape[1] or not np.allclose(M, M.T, atol=1e-12):
        raise PreconditionError("matrix must be square and symmetric")
    evals = np.linalg.eigvalsh(M) if M.size else np.zeros(0)
    nonzero = evals[evals > zero_tol]
    if nonzero.size == 0:
        raise NoNonzeroEigenvalueError("no nonzero eigenvalue")
    return SpectralSummary(evals, float(nonzero.min()), int(np.sum(evals <= zero_tol)))


def kernel_dim(M: np.ndarray, zero_tol: float = ZERO_TOL) -> int:
    if M.size == 0:
        return M.shape[0]
    return int(np.sum(np.linalg.eigvalsh(M) <= zero_tol))


def eigenprojector(M: np.ndarray, select, zero_tol: float = ZERO_TOL) -> np.ndarray:
    """Projector onto the eigenvectors of symmetric ``M`` whose eigenvalues satisfy ``select``."""
    if M.size == 0:
        return np.zeros_like(M)
    evals, vecs = np.linalg.eigh(M)
    V = vecs[:, select(evals, zero_tol)]
    return V @ V.T


def kernel_projector(M, zero_tol: float = ZERO_TOL):
    return eigenprojector(M, lambda e, tol: e <= tol, zero_tol)


def image_projector(M, zero_tol: float = ZERO_TOL):
    return eigenprojector(M, lambda e, tol: e > tol, zero_tol)


def hodge_projectors_exact(X: CliqueComplex, k: int):
    """Return ``(Proj(B_k), Proj(H_k), Proj(B^k))``: boundaries, harmonics, coboundaries."""
    L = laplacians(X, k)
    return image_projector(L.up), kernel_projector(L.full), image_projector(L.down)


def exact_target_projector(X: CliqueComplex, k: int, target: str) -> np.ndarray:
    """Exact projector for one of ``Z^k, B_k, Z_k, B^k, H_k``.

    ``Z^k`` is the cocycle space ``ker`` of the up Laplacian and ``Z_k`` the
    cycle space ``ker`` of the down Laplacian.
    """
    L = laplacians(X, k)
    table = {
        "Z^k": lambda: kernel_projector(L.up),
        "B_k": lambda: image_projector(L.up),
        "Z_k": lambda: kernel_projector(L.down),
        "B^k": lambda: image_projector(L.down),
        "H_k": lambda: kernel_projector(L.full),
    }
    if target not in table:
        raise PreconditionError(f"unknown target {target!r}")
    return table[target]()


def betti_exact(X: CliqueComplex, k: int) -> int:
    L = laplacians(X, k)
    beta = kernel_dim(L.full)
    d_k = boundary_matrix(X, k).entries
    d_k1 = boundary_matrix(X, k + 1).entries
    rank_k = np.linalg.matrix_rank(d_k) if d_k.size else 0
    rank_k1 = np.linalg.matrix_rank(d_k1) if d_k1.size else 0
    by_rank = X.count(k) - rank_k - rank_k1
    if by_rank != beta:
        raise AssertionError(f"nullity {beta} disagrees with rank formula {by_rank}")
    return beta


def embedding_matrix(Xi: CliqueComplex, Xj: CliqueComplex, k: int) -> np.ndarray:
    """Zero-padding inclusion of k-chains of ``Xi`` into k-chains of ``Xj``."""
    if Xi.n != Xj.n:
        raise PreconditionError("nested complexes must share the vertex set")
    if not np.allclose(Xi.weights, Xj.weights):
        raise PreconditionError("nested complexes must share vertex weights")
    E = np.zeros((Xj.count(k), Xi.count(k)))
    for c, simplex in enumerate(Xi.basis(k)):
        if not Xj.contains(simplex):
            raise PreconditionError(f"{simplex} lies in the smaller complex but not the larger")
        E[Xj.index_of(simplex, k), c] = 1.0
    return E


def check_nested(Xi: CliqueComplex, Xj: CliqueComplex) -> None:
    if Xi.n != Xj.n:
        raise PreconditionError("nested complexes must share the vertex set")
    if np.any(Xi.graph.adjacency & ~Xj.graph.adjacency):
        raise PreconditionError("the smaller graph has an edge missing from the larger graph")


def persistent_betti_exact(Xi: CliqueComplex, Xj: CliqueComplex, k: int) -> int:
    """k-cycles of ``Xi`` that stay non-bounding in ``Xj``.

    Computed as ``dim Z - dim(Z ∩ B)`` where ``Z`` is the cycle space of
    ``Xi`` pushed into ``Xj`` and ``B`` the boundary space of ``Xj``. The
    intersection dimension is the nullity of the stacked matrix ``[Z | -B]``.
    """
    check_nested(Xi, Xj)
    E = embedding_matrix(Xi, Xj, k)
    Li = laplacians(Xi, k)
    Lj = laplacians(Xj, k)
    Z = E @ _kernel_basis(Li.down)
    B = _image_basis(Lj.up)
    if Z.shape[1] == 0 or B.shape[1] == 0:
        return Z.shape[1]
    inter = null_space(np.hstack([Z, -B]), rcond=1e-10).shape[1]
    return Z.shape[1] - inter


def _kernel_basis(M):
    if M.size == 0:
        return np.zeros((M.shape[0], M.shape[0]))
    evals, vecs = np.linalg.eigh(M)
    return vecs[:, evals <= ZERO_TOL]


def _image_basis(M):
    if M.size == 0 or not np.any(np.abs(M) > ZERO_TOL):
        return np.zeros((M.shape[0], 0))
    return orth(M, rcond=1e-10)
