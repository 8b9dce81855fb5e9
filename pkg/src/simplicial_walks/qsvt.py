"""Polynomial filters on block-encoded Laplacians, realized as matrix functions.

The filters are even "rectangle" polynomials: near 1 on a band around zero
and near 0 outside it (band-pass), or the reverse (band-stop). Applying one
to the encoded block ``A = Laplacian / (sqrt(2) K)`` with the band edge
halfway to the smallest nonzero eigenvalue yields an approximate kernel or
image projector. The polynomial degree is the number of walk-unitary uses a
phase-factor circuit would need, so it is the cost we report.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.fft import dct
from scipy.special import erf, erfcinv

from .complex_core import CliqueComplex
from .errors import GapViolationError, NoNonzeroEigenvalueError, PreconditionError
from .hodge import ZERO_TOL, exact_target_projector
from .walk_quantum import BlockEncodedOperator, laplacian_block

GRID_POINTS = 10_000
# Empirical constants, natural log: degree <= DEGREE_CONSTANT * ln(1/eps) / delta for
# rectangle polynomials, and the projector bound follows from delta = lambda / (4 sqrt(2) K).
DEGREE_CONSTANT = 2.0
PROJECTOR_DEGREE_CONSTANT = 4 * math.sqrt(2) * DEGREE_CONSTANT


class Orientation(str, Enum):
    BAND_PASS = "band-pass"
    BAND_STOP = "band-stop"


@dataclass(frozen=True)
class RectanglePolynomial:
    """Even polynomial in the Chebyshev basis with its design parameters.

    ``tail_bound`` bounds the sup-norm distance between the untruncated
    smooth step and the truncated series, so together with the final affine
    squeeze it certifies ``0 <= P <= 1`` on ``[-1, 1]``.
    """

    coefficients: np.ndarray
    t: float
    delta: float
    epsilon: float
    orientation: Orientation
    tail_bound: float = 0.0

    @property
    def degree(self) -> int:
        nz = np.flatnonzero(self.coefficients)
        return int(nz[-1]) if nz.size else 0

    def __call__(self, x):
        return np.polynomial.chebyshev.chebval(x, self.coefficients)

    def certified_bound(self) -> float:
        """Upper bound on ``max |P|`` over ``[-1, 1]`` from the construction."""
        return 1.0 if self.tail_bound <= self.epsilon / 4 else math.inf


def constant_polynomial(value: float, orientation: Orientation = Orientation.BAND_PASS) -> RectanglePolynomial:
    return RectanglePolynomial(np.array([float(value)]), 0.0, 0.0, 0.0, orientation)


def _chebyshev_coefficients(f, n_nodes: int) -> np.ndarray:
    """Chebyshev interpolation coefficients of ``f`` at first-kind nodes, via DCT-II."""
    j = np.arange(n_nodes)
    nodes = np.cos(np.pi * (j + 0.5) / n_nodes)
    c = dct(f(nodes), type=2) / n_nodes
    c[0] /= 2
    return c


def rectangle_polynomial(t: float, delta: float, epsilon: float, orientation=Orientation.BAND_PASS) -> RectanglePolynomial:
    """Even polynomial that is ``epsilon``-close to a step of half-width ``t`` outside ``t ± delta``.

    Construction: the mollified box ``(erf(a(x+t)) - erf(a(x-t)))/2`` with
    ``a = erfcinv(epsilon/4) / delta`` is within ``epsilon/4`` of the ideal
    box outside the transition bands. Its Chebyshev series is truncated at
    the lowest even degree whose coefficient tail is at most ``epsilon/4``,
    then squeezed by ``p -> (p + epsilon/4) / (1 + epsilon/2)`` into
    ``[0, 1]``.
    """
    orientation = Orientation(orientation)
    if not (0 < delta < t and t + delta <= 1 + 1e-12):
        raise PreconditionError(f"need 0 < delta < t and t + delta <= 1, got t={t}, delta={delta}")
    if not 0 < epsilon < 0.5:
        raise PreconditionError(f"epsilon must lie in (0, 1/2), got {epsilon}")
    a = float(erfcinv(epsilon / 4)) / delta

    def box(x):
        b = 0.5 * (erf(a * (x + t)) - erf(a * (x - t)))
        return b if orientation is Orientation.BAND_PASS else 1.0 - b

    n_nodes = 1 << max(8, math.ceil(math.log2(8 * a + 64)))
    while True:
        c = _chebyshev_coefficients(box, n_nodes)
        # the top eighth sits at rounding level once aliasing is negligible
        if np.max(np.abs(c[-n_nodes // 8 :])) < 1e-14 or n_nodes >= 1 << 20:
            break
        n_nodes *= 2
    c[1::2] = 0.0
    tails = np.cumsum(np.abs(c[::-1]))[::-1]  # tails[d] = sum_{j >= d} |c_j|
    degree = 0
    while degree + 2 < len(c) and tails[degree + 1] > epsilon / 4:
        degree += 2
    tail = float(tails[degree + 1]) if degree + 1 < len(c) else 0.0
    coeffs = c[: degree + 1].copy()
    coeffs[0] += epsilon / 4
    coeffs /= 1 + epsilon / 2
    return RectanglePolynomial(coeffs, t, delta, epsilon, orientation, tail)


def check_rectangle(poly: RectanglePolynomial, points: int = GRID_POINTS) -> dict:
    """Grid check of boundedness, evenness and both band conditions."""
    x = np.linspace(-1, 1, points)
    y = poly(x)
    t, d, eps = poly.t, poly.delta, poly.epsilon
    inner = np.abs(x) <= t - d
    outer = np.abs(x) >= t + d
    hi, lo = (inner, outer) if poly.orientation is Orientation.BAND_PASS else (outer, inner)
    return {
        "bounded": bool(np.all(np.abs(y) <= 1 + 1e-12)),
        "even": bool(np.allclose(y, poly(-x), atol=1e-12)),
        "high_band": bool(np.all(y[hi] >= 1 - eps)),
        "low_band": bool(np.all(y[lo] <= eps)),
        "max_abs": float(np.max(np.abs(y))),
    }


def matrix_chebyshev(A: np.ndarray, coefficients: np.ndarray) -> np.ndarray:
    """Clenshaw recurrence for ``sum_j c_j T_j(A)`` with symmetric ``A``."""
    A = np.asarray(A, dtype=float)
    n = A.shape[0]
    eye = np.eye(n)
    b1 = np.zeros_like(A)
    b2 = np.zeros_like(A)
    for c in coefficients[:0:-1]:
        b1, b2 = c * eye + 2 * A @ b1 - b2, b1
    return coefficients[0] * eye + A @ b1 - b2


def eigen_apply(A: np.ndarray, f) -> np.ndarray:
    evals, vecs = np.linalg.eigh((A + A.T) / 2)
    return (vecs * f(evals)) @ vecs.T


def apply_polynomial_to_block(B: BlockEncodedOperator | np.ndarray, poly) -> np.ndarray:
    """``P(A)`` for the symmetric block ``A`` of ``B`` (or ``B`` itself if it is a matrix).

    ``poly`` is a :class:`RectanglePolynomial` or a Chebyshev coefficient array.
    """
    A = B.block if isinstance(B, BlockEncodedOperator) else np.asarray(B, dtype=float)
    coeffs = poly.coefficients if isinstance(poly, RectanglePolynomial) else np.asarray(poly, dtype=float)
    if A.size and np.linalg.norm(A, 2) > 1 + 1e-12:
        raise PreconditionError("block norm exceeds 1")
    if A.size == 0:
        return A.copy()
    return matrix_chebyshev(A, coeffs)


# ----------------------------------------------------------------------
# projector synthesis

TARGETS = ("Z^k", "B_k", "Z_k", "B^k", "H_k")
TARGET_KIND = {"Z^k": "up", "B_k": "up", "Z_k": "down", "B^k": "down", "H_k": "harmonic"}
TARGET_ORIENTATION = {
    "Z^k": Orientation.BAND_PASS,
    "B_k": Orientation.BAND_STOP,
    "Z_k": Orientation.BAND_PASS,
    "B^k": Orientation.BAND_STOP,
    "H_k": Orientation.BAND_PASS,
}
CLI_TARGETS = {"zck": "Z^k", "bk": "B_k", "zk": "Z_k", "bck": "B^k", "hk": "H_k"}


@dataclass(frozen=True, eq=False)
class ProjectorEncoding:
    target: str
    block: np.ndarray
    err: float
    degree_used: int
    walk_uses: int
    polynomial: RectanglePolynomial | None = None
    K: float = float("nan")
    lam: float = float("nan")


def projector_encoding(
    X: CliqueComplex,
    k: int,
    target: str,
    epsilon: float,
    tier: str = "oracle",
    prep_err: float = 0.0,
    seed: int = 0,
    strict: bool = False,
) -> ProjectorEncoding:
    """Approximate projector onto one of the five Hodge-related subspaces.

    The walk kind follows the target: up for cocycles and boundaries, down
    for cycles and coboundaries, harmonic for harmonics. With
    ``l = lambda / (sqrt(2) K)`` the band edge is ``t = l/2`` and the
    transition half-width is ``l/4``.

    When the Laplacian is identically zero its kernel is everything, so the
    projector is the constant polynomial 1 (band-pass) or 0 (band-stop) at
    degree 0. ``strict=True`` raises instead.
    """
    if target not in TARGETS:
        raise PreconditionError(f"target must be one of {TARGETS}")
    enc = laplacian_block(X, k, TARGET_KIND[target], tier, prep_err, seed)
    orientation = TARGET_ORIENTATION[target]
    A = enc.block
    evals = np.linalg.eigvalsh(A) if A.size else np.zeros(0)
    nonzero = evals[evals > ZERO_TOL / enc.scale] if enc.scale > 0 else np.zeros(0)
    if nonzero.size == 0:
        if strict:
            raise NoNonzeroEigenvalueError("no nonzero eigenvalue")
        value = 1.0 if orientation is Orientation.BAND_PASS else 0.0
        poly = constant_polynomial(value, orientation)
        block = value * np.eye(A.shape[0])
        return ProjectorEncoding(target, block, epsilon, 0, 0, poly, enc.scale / math.sqrt(2), 0.0)
    lam_tilde = float(nonzero.min())
    poly = rectangle_polynomial(lam_tilde / 2, lam_tilde / 4, epsilon, orientation)
    block = apply_polynomial_to_block(enc, poly)
    K = enc.scale / math.sqrt(2)
    return ProjectorEncoding(target, block, epsilon, poly.degree, poly.degree, poly, K, lam_tilde * enc.scale)


def projector_error(X: CliqueComplex, k: int, enc: ProjectorEncoding) -> float:
    exact = exact_target_projector(X, k, enc.target)
    return float(np.linalg.norm(enc.block - exact, 2)) if exact.size else 0.0


def intersection_projector(
    A: ProjectorEncoding | np.ndarray,
    B: ProjectorEncoding | np.ndarray,
    gap: float,
    epsilon: float,
    threshold: float | None = None,
) -> ProjectorEncoding:
    """Approximate projector onto the intersection of the ranges of two projectors.

    The singular values of ``M = A B`` are cosines of principal angles; those
    equal to 1 belong to the intersection. An even band-stop polynomial with
    edge ``threshold`` (default ``1 - 2 gap``) and half-width ``gap`` is
    applied to them through ``T_{2j}(s) = T_j(2 s^2 - 1)`` on ``M^T M``.
    Singular values inside ``(threshold - gap, threshold + gap)`` raise
    :class:`GapViolationError`.
    """
    Pa = A.block if isinstance(A, ProjectorEncoding) else np.asarray(A, dtype=float)
    Pb = B.block if isinstance(B, ProjectorEncoding) else np.asarray(B, dtype=float)
    if Pa.shape != Pb.shape:
        raise PreconditionError("projectors act on different spaces")
    if threshold is None:
        threshold = 1 - 2 * gap
    if not (0 < gap < threshold and threshold + gap <= 1):
        raise PreconditionError(f"gap {gap} and threshold {threshold} are incompatible")
    M = Pa @ Pb
    svals = np.linalg.svd(M, compute_uv=False) if M.size else np.zeros(0)
    bad = svals[(svals > threshold - gap) & (svals < threshold + gap)]
    if bad.size:
        raise GapViolationError(f"singular values {np.round(bad, 6).tolist()} lie in the forbidden band around {threshold}")
    poly = rectangle_polynomial(threshold, gap, epsilon, Orientation.BAND_STOP)
    half = poly.coefficients[::2]  # coefficient of T_j(2 s^2 - 1)
    Y = 2 * M.T @ M - np.eye(M.shape[0])
    block = matrix_chebyshev(Y, half) if M.size else M.copy()
    ea = A.err if isinstance(A, ProjectorEncoding) else 0.0
    eb = B.err if isinstance(B, ProjectorEncoding) else 0.0
    da = A.walk_uses if isinstance(A, ProjectorEncoding) else 0
    db = B.walk_uses if isinstance(B, ProjectorEncoding) else 0
    uses = poly.degree * (da + db)
    return ProjectorEncoding("intersection", block, epsilon + ea + eb, poly.degree, uses, poly)


# ----------------------------------------------------------------------
# block measurement


@dataclass(frozen=True, eq=False)
class BlockMeasurement:
    """Outcome statistics of flagging a state with an approximate projector."""

    p1: float
    p0: float
    _branch1: np.ndarray
    _branch0: np.ndarray

    def post1(self) -> np.ndarray:
        if self.p1 < 1e-14:
            raise PreconditionError("outcome 1 has probability numerically zero")
        return self._branch1 / self.p1

    def post0(self) -> np.ndarray:
        if self.p0 < 1e-14:
            raise PreconditionError("outcome 0 has probability numerically zero")
        return self._branch0 / self.p0


def _as_density(state: np.ndarray) -> np.ndarray:
    state = np.asarray(state, dtype=float)
    rho = np.outer(state, state) if state.ndim == 1 else state
    if abs(np.trace(rho) - 1) > 1e-9:
        raise PreconditionError("state must have unit trace")
    return rho


def block_measurement(proj: ProjectorEncoding | np.ndarray, state: np.ndarray) -> BlockMeasurement:
    """Measure the flag of ``|0>|psi> -> |1> Pi|psi> + |0> (I - Pi)|psi>``.

    ``state`` is a pure state vector or a density matrix.
    """
    Pi = proj.block if isinstance(proj, ProjectorEncoding) else np.asarray(proj, dtype=float)
    rho = _as_density(state)
    if rho.shape != Pi.shape:
        raise PreconditionError("state and projector dimensions differ")
    Q = np.eye(Pi.shape[0]) - Pi
    br1 = Pi @ rho @ Pi.T
    br0 = Q @ rho @ Q.T
    p1 = float(np.trace(br1))
    p0 = float(np.trace(br0))
    return BlockMeasurement(p1, p0, br1, br0)


def measurement_channel(Pi: np.ndarray, rho: np.ndarray) -> np.ndarray:
    """Output of the flagging channel, with the flag qubit as the leading tensor factor.

    For an exact projector the flagging map is an isometry. For an
    approximate one, the two Kraus operators ``Pi`` and ``I - Pi`` are
    completed with ``sqrt(I - Pi^2 - (I-Pi)^2)`` on a third, discarded
    branch so the map stays trace preserving.
    """
    Pi = (Pi + Pi.T) / 2
    d = Pi.shape[0]
    Q = np.eye(d) - Pi
    defect = np.eye(d) - Pi @ Pi - Q @ Q
    R = eigen_apply(defect, lambda e: np.sqrt(np.clip(e, 0, None)))
    V = np.vstack([Q, Pi])  # flag 0 block then flag 1 block
    out = V @ rho @ V.T
    out[:d, :d] += R @ rho @ R.T
    return out


def trace_distance(a: np.ndarray, b: np.ndarray) -> float:
    return 0.5 * float(np.sum(np.abs(np.linalg.eigvalsh((a - b + (a - b).T) / 2))))
