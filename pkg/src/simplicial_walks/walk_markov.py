"""Classical walks on oriented k-simplices with an absorbing sink.

State order for every matrix here: the positive simplices in basis order,
then their negatives in the same order, then the sink at index ``2 * n_k``.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .complex_core import (
    CliqueComplex,
    OrientedSimplexLabel,
    Relation,
    THETA,
    adjacency,
    encode_label,
    exchange_neighbors,
)
from .errors import PreconditionError


class WalkKind(str, Enum):
    UP = "up"
    DOWN = "down"
    HARMONIC = "harmonic"


LAZY_KINDS = ("up_PS17", "down_M16")


@dataclass(frozen=True, eq=False)
class TransitionMatrix:
    kind: str
    k: int
    entries: np.ndarray
    K: float
    eta: np.ndarray
    complex: CliqueComplex

    @property
    def n_k(self) -> int:
        return (self.entries.shape[0] - 1) // 2

    @property
    def theta_index(self) -> int:
        return 2 * self.n_k

    def restricted(self) -> np.ndarray:
        """Block over the oriented simplices, dropping the sink."""
        m = 2 * self.n_k
        return self.entries[:m, :m]


@dataclass(frozen=True)
class ExpectationTrace:
    times: np.ndarray
    raw: np.ndarray
    normalized: np.ndarray
    p: float
    scaling: float


def state_labels(X: CliqueComplex, k: int) -> list[OrientedSimplexLabel]:
    """Labels of the walk states in matrix order."""
    n = X.n
    pos = [encode_label(s, n) for s in X.basis(k)]
    return pos + [lab.flipped() for lab in pos] + [encode_label(THETA, n)]


def state_index(X: CliqueComplex, k: int, sigma) -> int:
    """Matrix index of an oriented simplex (vertex sequence) or THETA."""
    m = X.count(k)
    if sigma is THETA:
        return 2 * m
    lab = encode_label(sigma, X.n, X)
    if lab.dim != k:
        raise PreconditionError(f"{sigma} is not a {k}-simplex")
    return X.index_of(lab.vertices, k) + m * lab.s


def _check_k(X: CliqueComplex, k: int) -> None:
    if not 1 <= k <= X.k_max:
        raise PreconditionError(f"walks need 1 <= k <= {X.k_max}, got k={k}")
    if X.count(k) == 0:
        raise PreconditionError(f"the complex has no {k}-simplices")


def normalization_constant(X: CliqueComplex, k: int, kind) -> float:
    """Maximum over k-simplices of the row-mass bound for the walk kind.

    With unit weights this is ``(n-k-1)(k+2)`` for up, ``(k+1)(n-k)`` for
    down and ``n + (n-k-1)(k+1)`` for harmonic.
    """
    kind = WalkKind(kind)
    _check_k(X, k)
    w = X.weights
    total_sq = float(np.sum(w ** 2))
    best = 0.0
    for sigma in X.basis(k):
        inside = np.zeros(X.n, dtype=bool)
        inside[list(sigma)] = True
        w_in, w_out = w[inside], w[~inside]
        if kind is WalkKind.UP:
            val = float(np.sum(w_out * (w_out + w_in.sum())))
        elif kind is WalkKind.DOWN:
            val = float(np.sum(w_in * (w_in + w_out.sum())))
        else:
            val = total_sq + float(w_out.sum() * w_in.sum())
        best = max(best, val)
    return best


def transition_matrix(X: CliqueComplex, k: int, kind) -> TransitionMatrix:
    """Row-stochastic walk matrix whose off-diagonal entries are ``|Laplacian|/K``.

    A simplex stays put with probability (diagonal Laplacian entry)/K, moves
    to each similarly related neighbour with probability ``w(out) w(in) / K``
    and sends the rest of its mass to the sink.
    """
    kind = WalkKind(kind)
    K = normalization_constant(X, k, kind)
    basis = X.basis(k)
    m = len(basis)
    n = X.n
    w = X.weights
    P = np.zeros((2 * m + 1, 2 * m + 1))
    for a, sigma in enumerate(basis):
        up_mass = sum(w[u] ** 2 for u in range(n) if u not in sigma and X.contains(sigma + (u,)))
        down_mass = float(np.sum(w[list(sigma)] ** 2))
        stay = {WalkKind.UP: up_mass, WalkKind.DOWN: down_mass, WalkKind.HARMONIC: up_mass + down_mass}[kind]
        lab = encode_label(sigma, n)
        moves = []
        for v_out, u_in, tau in exchange_neighbors(X, sigma):
            verdict = adjacency(X, lab, encode_label(tau, n))
            if kind is WalkKind.UP:
                rel = verdict.up
            elif kind is WalkKind.DOWN:
                rel = verdict.down
            else:
                rel = verdict.down if verdict.up is Relation.NONE else Relation.NONE
            if rel is Relation.NONE:
                continue
            # moving to the similarly related orientation of tau
            flip = 0 if rel is Relation.SIMILAR else 1
            moves.append((X.index_of(tau, k), flip, w[v_out] * w[u_in] / K))
        for s in (0, 1):
            row = a + s * m
            # K vanishes only for the up walk on a full simplex: everything absorbs
            P[row, row] = stay / K if K > 0 else 0.0
            for b, flip, prob in moves:
                P[row, b + m * (s ^ flip)] = prob
    P[2 * m, 2 * m] = 1.0
    eta = 1.0 - P[: 2 * m, : 2 * m].sum(axis=1)
    eta[np.abs(eta) < 1e-14] = 0.0
    P[: 2 * m, 2 * m] = eta
    return TransitionMatrix(kind.value, k, P, K, eta, X)


def _check_distribution(v: np.ndarray, size: int) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    if v.shape != (size,):
        raise PreconditionError(f"distribution must have length {size}")
    if np.any(v < 0):
        raise PreconditionError("distribution has negative entries")
    if abs(v.sum() - 1.0) > 1e-9:
        raise PreconditionError("distribution must sum to 1")
    return v


def evolve_distribution(P: TransitionMatrix, start, t: int) -> np.ndarray:
    """Exact ``start @ P**t``."""
    v = _check_distribution(start, P.entries.shape[0])
    if t < 0:
        raise PreconditionError("t must be nonnegative")
    for _ in range(t):
        v = v @ P.entries
    return v


def evolve_monte_carlo(P: TransitionMatrix, start, t: int, trajectories: int, seed: int) -> np.ndarray:
    """Empirical distribution after ``t`` steps of ``trajectories`` independent walkers."""
    v = _check_distribution(start, P.entries.shape[0])
    rng = np.random.default_rng(seed)
    state = rng.choice(len(v), size=trajectories, p=v)
    cum = np.cumsum(P.entries, axis=1)
    cum[:, -1] = 1.0
    for _ in range(t):
        u = rng.random(trajectories)
        state = np.argmax(cum[state] > u[:, None], axis=1)
    return np.bincount(state, minlength=len(v)) / trajectories


def _up_degree(X: CliqueComplex, sigma) -> int:
    return sum(1 for u in range(X.n) if u not in sigma and X.contains(sigma + (u,)))


def lazy_walk_matrix(X: CliqueComplex, k: int, kind: str, p: float) -> TransitionMatrix:
    """Lazy classical walks from the literature, with laziness ``p``.

    ``up_PS17`` moves to each up-dissimilar neighbour with probability
    ``(1-p) / ((k+1) deg)`` and has no sink mass. ``down_M16`` moves to each
    down-dissimilar neighbour with probability ``(1-p) / ((M-1)(k+1))``,
    ``M`` being the largest up-degree of a (k-1)-simplex, and sends the
    remainder to the sink.
    """
    if kind not in LAZY_KINDS:
        raise PreconditionError(f"kind must be one of {LAZY_KINDS}")
    _check_k(X, k)
    if not 0 <= p <= 1:
        raise PreconditionError("laziness must lie in [0, 1]")
    basis = X.basis(k)
    m = len(basis)
    n = X.n
    P = np.zeros((2 * m + 1, 2 * m + 1))
    if kind == "down_M16":
        M = max(_up_degree(X, f) for f in X.basis(k - 1))
        if M < 2:
            raise PreconditionError("every (k-1)-simplex has at most one coface; the walk is undefined")
        lateral = (1 - p) / ((M - 1) * (k + 1))
    for a, sigma in enumerate(basis):
        lab = encode_label(sigma, n)
        if kind == "up_PS17":
            deg = _up_degree(X, sigma)
            if deg == 0:
                raise PreconditionError(f"simplex {sigma} has no coface")
            lateral = (1 - p) / ((k + 1) * deg)
        moves = []
        for _, _, tau in exchange_neighbors(X, sigma):
            verdict = adjacency(X, lab, encode_label(tau, n))
            rel = verdict.up if kind == "up_PS17" else verdict.down
            if rel is Relation.NONE:
                continue
            flip = 1 if rel is Relation.SIMILAR else 0
            moves.append((X.index_of(tau, k), flip))
        for s in (0, 1):
            row = a + s * m
            P[row, row] = p
            for b, flip in moves:
                P[row, b + m * (s ^ flip)] = lateral
    P[2 * m, 2 * m] = 1.0
    eta = 1.0 - P[: 2 * m, : 2 * m].sum(axis=1)
    eta[np.abs(eta) < 1e-14] = 0.0
    if np.any(eta < 0):
        raise AssertionError("lazy walk row exceeds unit mass")
    P[: 2 * m, 2 * m] = eta
    return TransitionMatrix(kind, k, P, float("nan"), eta, X)


def lazy_walk_scaling(P: TransitionMatrix, p: float) -> float:
    """Per-step factor that turns the raw expectation process into the normalized one."""
    k = P.k
    if P.kind == "up_PS17":
        return (k + 1) / (p * k + 1)
    if P.kind == "down_M16":
        X = P.complex
        M = max(_up_degree(X, f) for f in X.basis(k - 1))
        return (M - 1) / (p * (M - 2) + 1)
    raise PreconditionError(f"no normalization is tabulated for kind {P.kind!r}")


def expectation_process(P: TransitionMatrix, start, t: int, scaling: float, p: float = float("nan")) -> ExpectationTrace:
    """Signed occupancy ``p_t(sigma+) - p_t(sigma-)`` for ``0..t`` steps.

    ``start`` is an oriented simplex given as a vertex sequence.
    """
    if start is THETA:
        raise PreconditionError("the expectation process needs a non-absorbing start")
    size = P.entries.shape[0]
    m = P.n_k
    v = np.zeros(size)
    v[state_index(P.complex, P.k, start)] = 1.0
    raw = np.empty((t + 1, m))
    for step in range(t + 1):
        raw[step] = v[:m] - v[m : 2 * m]
        v = v @ P.entries
    factors = scaling ** np.arange(t + 1)
    return ExpectationTrace(np.arange(t + 1), raw, raw * factors[:, None], p, scaling)


appendix_walk_matrix = lazy_walk_matrix
