"""Sampling-based estimators of normalized Betti numbers and the homology verifier."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .complex_core import CliqueComplex, VertexWeightedGraph, build_clique_complex
from .errors import PreconditionError
from .hodge import betti_exact, check_nested, embedding_matrix, laplacians, persistent_betti_exact
from .qsvt import (
    Orientation,
    ProjectorEncoding,
    apply_polynomial_to_block,
    block_measurement,
    intersection_projector,
    projector_encoding,
    rectangle_polynomial,
)
from .walk_quantum import laplacian_block

DEFAULT_FAILURE = 0.05


@dataclass(frozen=True)
class EstimateReport:
    value: float
    epsilon: float
    samples_used: int
    confidence: float
    budget: float
    truth: float | None = None
    details: dict = field(default_factory=dict)


@dataclass(frozen=True)
class VerifierTranscript:
    k: int
    g: float
    witness: np.ndarray
    decision: str
    p1: float
    outcome: int


def hoeffding_samples(epsilon: float, failure: float = DEFAULT_FAILURE) -> int:
    """Samples for a two-sided Hoeffding bound at the requested failure rate, and at least ``1/eps^2``."""
    if not 0 < epsilon < 1:
        raise PreconditionError("epsilon must lie in (0, 1)")
    return max(math.ceil(math.log(2 / failure) / (2 * epsilon ** 2)), math.ceil(epsilon ** -2))


def hoeffding_confidence(n: int, epsilon: float) -> float:
    return max(0.0, 1 - 2 * math.exp(-2 * n * epsilon ** 2))


def sampler_distribution(n_k: int, tvd_noise: float, favored: int = 0) -> np.ndarray:
    """Uniform distribution over ``n_k`` items, tilted to total-variation distance ``tvd_noise``.

    The favored item gains ``tvd_noise`` and the others share the loss evenly.
    """
    if n_k < 1:
        raise PreconditionError("there are no simplices to sample")
    if tvd_noise < 0:
        raise PreconditionError("tvd_noise must be nonnegative")
    q = np.full(n_k, 1.0 / n_k)
    if tvd_noise > 0:
        if n_k == 1 or tvd_noise > (n_k - 1) / n_k:
            raise PreconditionError(f"tvd_noise {tvd_noise} is unreachable with {n_k} items")
        q -= tvd_noise / (n_k - 1)
        q[favored] = 1.0 / n_k + tvd_noise
    return q


def uniform_simplex_sampler(X: CliqueComplex, k: int, tvd_noise: float = 0.0, seed: int | None = None, size: int | None = None):
    """Draw positively oriented k-simplices, uniformly when ``tvd_noise`` is 0.

    Returns one vertex tuple, or a list of them when ``size`` is given.
    """
    n_k = X.count(k)
    if n_k == 0:
        raise PreconditionError(f"the complex has no {k}-simplices")
    rng = np.random.default_rng(seed)
    q = sampler_distribution(n_k, tvd_noise)
    idx = rng.choice(n_k, size=size if size is not None else 1, p=q)
    basis = X.basis(k)
    if size is None:
        return basis[int(idx[0])]
    return [basis[int(i)] for i in idx]


def _flag_probabilities(Pi: np.ndarray) -> np.ndarray:
    """Outcome-1 probability of the block measurement for every basis state."""
    return np.clip(np.sum(Pi * Pi, axis=0), 0.0, 1.0)


def _sample_and_measure(p1: np.ndarray, q: np.ndarray, n_samples: int, rng: np.random.Generator) -> int:
    idx = rng.choice(len(q), size=n_samples, p=q)
    return int(np.sum(rng.random(n_samples) < p1[idx]))


def estimate_normalized_betti(
    X: CliqueComplex,
    k: int,
    epsilon: float,
    delta_sampler: float = 0.0,
    epsilon_proj: float = 1e-6,
    seed: int = 0,
    tier: str = "oracle",
    with_truth: bool = True,
) -> EstimateReport:
    """Fraction of sampled k-simplices whose harmonic block measurement reads 1.

    Guarantee: within ``epsilon + delta_sampler + O(epsilon_proj)`` of
    ``beta_k / n_k`` with probability at least ``confidence``.
    """
    n_k = X.count(k)
    if n_k == 0:
        raise PreconditionError(f"the complex has no {k}-simplices")
    proj = projector_encoding(X, k, "H_k", epsilon_proj, tier)
    N = hoeffding_samples(epsilon)
    rng = np.random.default_rng(seed)
    q = sampler_distribution(n_k, delta_sampler, favored=int(rng.integers(n_k)))
    hits = _sample_and_measure(_flag_probabilities(proj.block), q, N, rng)
    truth = betti_exact(X, k) / n_k if with_truth else None
    return EstimateReport(
        value=hits / N,
        epsilon=epsilon,
        samples_used=N,
        confidence=hoeffding_confidence(N, epsilon),
        budget=epsilon + delta_sampler + 2 * epsilon_proj,
        truth=truth,
        details={"degree_used": proj.degree_used, "hits": hits},
    )


def estimate_normalized_persistent_betti(
    Xi: CliqueComplex,
    Xj: CliqueComplex,
    k: int,
    epsilon: float,
    delta_sampler: float = 0.0,
    epsilon_proj: float = 1e-6,
    gap: float = 0.1,
    seed: int = 0,
    tier: str = "oracle",
    with_truth: bool = True,
) -> EstimateReport:
    """Estimate ``beta_k^{i,j} / n_k(Xi)`` as a difference of two sampled fractions.

    The first fraction uses the cycle projector of ``Xi`` (down walk). The
    second uses the intersection of those cycles, pushed into ``Xj``, with
    the boundary space of ``Xj`` (up walk). Each fraction carries its own
    Hoeffding budget and the report adds them.
    """
    check_nested(Xi, Xj)
    n_k = Xi.count(k)
    if n_k == 0:
        raise PreconditionError(f"the smaller complex has no {k}-simplices")
    E = embedding_matrix(Xi, Xj, k)
    Z = projector_encoding(Xi, k, "Z_k", epsilon_proj, tier)
    B = projector_encoding(Xj, k, "B_k", epsilon_proj, tier)
    Z_emb = ProjectorEncoding("Z_k", E @ Z.block @ E.T, Z.err, Z.degree_used, Z.walk_uses, Z.polynomial)
    inter = intersection_projector(Z_emb, B, gap, epsilon_proj)
    N = hoeffding_samples(epsilon)
    rng = np.random.default_rng(seed)
    q = sampler_distribution(n_k, delta_sampler, favored=int(rng.integers(n_k)))
    p_first = _flag_probabilities(Z.block)
    p_second = _flag_probabilities(inter.block @ E)
    hits1 = _sample_and_measure(p_first, q, N, rng)
    hits2 = _sample_and_measure(p_second, q, N, rng)
    v1, v2 = hits1 / N, hits2 / N
    truth = persistent_betti_exact(Xi, Xj, k) / n_k if with_truth else None
    single = epsilon + delta_sampler + 2 * epsilon_proj
    return EstimateReport(
        value=float(np.clip(v1 - v2, 0.0, 1.0)),
        epsilon=epsilon,
        samples_used=2 * N,
        confidence=max(0.0, 1 - 4 * math.exp(-2 * N * epsilon ** 2)),
        budget=2 * single + inter.err,
        truth=truth,
        details={"cycles": v1, "bounding_cycles": v2, "intersection_degree": inter.degree_used},
    )


def check_promise_weights(graph: VertexWeightedGraph, exponent: float = 3.0) -> None:
    floor = graph.n ** (-exponent)
    w = graph.weights
    if np.any(w > 1 + 1e-12) or np.any(w < floor):
        raise PreconditionError(f"vertex weights must lie in [n^-{exponent:g}, 1]")


def low_energy_projector(X: CliqueComplex, k: int, g: float, epsilon: float, tier: str = "oracle") -> np.ndarray:
    """Approximate projector onto eigenvectors of the full Laplacian below ``g / 2``.

    The band is placed from ``g`` alone: with ``s = g / (sqrt(2) K)`` the
    edge is ``s/2`` and the half-width ``s/4``.
    """
    enc = laplacian_block(X, k, "harmonic", tier)
    s = g / enc.scale
    if not 0 < 0.75 * s <= 1:
        raise PreconditionError("gap value g is out of range for this complex")
    poly = rectangle_polynomial(s / 2, s / 4, epsilon, Orientation.BAND_PASS)
    return apply_polynomial_to_block(enc, poly)


def verify_promise_homology(
    graph: VertexWeightedGraph,
    k: int,
    g: float,
    witness,
    epsilon: float = 1e-7,
    seed: int = 0,
    weight_exponent: float = 3.0,
    tier: str = "oracle",
) -> VerifierTranscript:
    """Single-message verifier: block-measure the witness and accept on outcome 1."""
    if g <= 0:
        raise PreconditionError("g must be positive")
    check_promise_weights(graph, weight_exponent)
    X = build_clique_complex(graph)
    if not 1 <= k <= X.k_max:
        raise PreconditionError(f"k must lie in [1, {X.k_max}]")
    w = np.asarray(witness, dtype=float)
    if w.shape != (X.count(k),):
        raise PreconditionError(f"witness must have {X.count(k)} entries")
    if abs(np.linalg.norm(w) - 1) > 1e-9:
        raise PreconditionError("witness must have unit norm")
    Pi = low_energy_projector(X, k, g, epsilon, tier)
    meas = block_measurement(Pi, w)
    rng = np.random.default_rng(seed)
    outcome = int(rng.random() < meas.p1)
    return VerifierTranscript(k, g, w, "YES" if outcome else "NO", meas.p1, outcome)


def lambda_min_full(X: CliqueComplex, k: int) -> float:
    return float(np.linalg.eigvalsh(laplacians(X, k).full).min())
