"""Walk unitaries at two tiers and the orientation-interference Laplacian encoding.

Register basis
--------------
A walk register holds one of ``r = 2 n_k + 4`` basis states, indexed as

* ``0 .. m-1``: positive k-simplices, ``m .. 2m-1``: their negatives,
* ``2m``: the sink ``(0^n, 0, 1)``,
* ``2m+1``: the blank state ``(0^n, 0, 0)``,
* ``2m+2``: ``(0^n, 1, 1)``, ``2m+3``: ``(0^n, 1, 0)``.

The last two close the span under a Hadamard-type gate on the orientation
bit, so every operator below maps this finite basis to itself.

Oracle tier: a two-register Szegedy dilation of a transition matrix.
Circuit tier: two walk registers plus an index register that records which
vertex was added and removed. Its basis is ``null``, ``slack`` and
``(a, b, tag)`` for vertices ``a, b`` and ``tag`` in ``{0, 1, 2}``.

Unitaries are assembled as sparse matrices. Each walk unitary is a direct sum
of Householder reflections, one per control state, that send the blank
ancilla to the prepared superposition.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
import scipy.sparse as sp

from .complex_core import CliqueComplex, membership
from .errors import PreconditionError
from .walk_markov import TransitionMatrix, WalkKind, normalization_constant, transition_matrix

UNITARY_TOL = 1e-10


@dataclass(eq=False)
class BlockEncodedOperator:
    """A unitary whose blank-ancilla corner, times ``scale``, approximates a target.

    ``block`` is the corner restricted to ``domain`` (a list of register
    indices). ``unitary()`` builds the full sparse matrix on demand.
    """

    block: np.ndarray
    scale: float
    ancilla_dim: int
    domain: np.ndarray
    err: float
    system_dim: int
    blank_ancilla: int = 0
    _builder: Callable[[], sp.csr_matrix] | None = field(default=None, repr=False)
    _unitary: sp.csr_matrix | None = field(default=None, repr=False)

    @property
    def encoded(self) -> np.ndarray:
        """The operator the encoding represents: ``scale * block``."""
        return self.scale * self.block

    def unitary(self) -> sp.csr_matrix:
        if self._unitary is None:
            if self._builder is None:
                raise PreconditionError("this encoding carries no explicit unitary")
            self._unitary = self._builder().tocsr()
        return self._unitary

    def unitarity_error(self) -> float:
        U = self.unitary()
        D = (U.T @ U - sp.identity(U.shape[0], format="csr")).tocoo()
        return float(np.max(np.abs(D.data), initial=0.0))

    def block_from_unitary(self) -> np.ndarray:
        """Read the corner directly off the explicit unitary.

        Composite index is ``system * ancilla_dim + ancilla`` with the blank
        ancilla state at ancilla index ``blank_ancilla``.
        """
        U = self.unitary()
        rows = self.domain * self.ancilla_dim + self.blank_ancilla
        return U[rows][:, rows].toarray()


@dataclass(eq=False)
class WalkUnitary:
    kind: str
    tier: str
    k: int
    encoding: BlockEncodedOperator
    transition: TransitionMatrix
    cost: dict | None = None
    amplitudes: np.ndarray | None = field(default=None, repr=False)
    index_labels: list | None = field(default=None, repr=False)


# ----------------------------------------------------------------------
# register helpers


def register_size(m: int) -> int:
    return 2 * m + 4


def _reg(m: int):
    return {"theta": 2 * m, "blank": 2 * m + 1, "theta_neg": 2 * m + 2, "blank_neg": 2 * m + 3}


def orientation_partner(m: int) -> np.ndarray:
    """Index of the state with the orientation bit flipped."""
    r = register_size(m)
    partner = np.empty(r, dtype=int)
    partner[:m] = np.arange(m, 2 * m)
    partner[m : 2 * m] = np.arange(m)
    R = _reg(m)
    partner[R["theta"]], partner[R["theta_neg"]] = R["theta_neg"], R["theta"]
    partner[R["blank"]], partner[R["blank_neg"]] = R["blank_neg"], R["blank"]
    return partner


def orientation_bit(m: int) -> np.ndarray:
    s = np.zeros(register_size(m), dtype=int)
    s[m : 2 * m] = 1
    R = _reg(m)
    s[R["theta_neg"]] = s[R["blank_neg"]] = 1
    return s


def hz_gate(m: int) -> sp.csr_matrix:
    """``[[1, -1], [1, 1]] / sqrt(2)`` on the orientation bit, identity elsewhere."""
    r = register_size(m)
    partner = orientation_partner(m)
    s = orientation_bit(m)
    H = sp.lil_matrix((r, r))
    c = 1 / math.sqrt(2)
    for a in range(r):
        b = partner[a]
        # column a is the image of basis state a
        H[a, a] = c
        H[b, a] = c if s[a] == 0 else -c
    return H.tocsr()


def _householder_blocks(vectors: dict[int, np.ndarray], blank: int, block_dim: int, n_blocks: int) -> sp.csr_matrix:
    """Direct sum over control states of reflections sending ``blank`` to ``vectors[c]``.

    Controls without a vector act as the identity.
    """
    rows, cols, vals = [], [], []
    for c, psi in vectors.items():
        v = -psi.copy()
        v[blank] += 1.0
        nrm2 = float(v @ v)
        if nrm2 < 1e-30:
            continue
        idx = np.flatnonzero(v)
        outer = -2.0 * np.outer(v[idx], v[idx]) / nrm2
        base = c * block_dim
        ii, jj = np.meshgrid(idx, idx, indexing="ij")
        rows.append((base + ii).ravel())
        cols.append((base + jj).ravel())
        vals.append(outer.ravel())
    dim = n_blocks * block_dim
    correction = sp.csr_matrix(
        (np.concatenate(vals) if vals else [], (np.concatenate(rows) if rows else [], np.concatenate(cols) if cols else [])),
        shape=(dim, dim),
    )
    return (sp.identity(dim, format="csr") + correction).tocsr()


# ----------------------------------------------------------------------
# oracle tier


def _oracle_amplitudes(P: TransitionMatrix) -> np.ndarray:
    """``A[a, b] = sqrt(P[a, b])`` over the walk states, zero-padded to the register."""
    m = P.n_k
    r = register_size(m)
    A = np.zeros((r, r))
    A[: 2 * m + 1, : 2 * m + 1] = np.sqrt(np.clip(P.entries, 0.0, None))
    return A


def szegedy_dilation(P: TransitionMatrix) -> WalkUnitary:
    """Oracle-tier walk ``U^T SWAP U`` with ``U|a>|blank> = sum_b sqrt(P[a,b]) |a>|b>``.

    The blank-ancilla corner over the oriented simplices is
    ``sqrt(P[x,y] P[y,x])``, which equals ``P[x,y]`` because the walk matrix
    is symmetric away from the sink.
    """
    m = P.n_k
    r = register_size(m)
    A = _oracle_amplitudes(P)
    corner = A * A.T
    domain = np.arange(2 * m)
    blank = _reg(m)["blank"]

    def build():
        vecs = {a: A[a] for a in range(2 * m + 1)}
        U = _householder_blocks(vecs, blank, r, r)
        S = _swap_two_registers(r, 1)
        return U.T @ S @ U

    enc = BlockEncodedOperator(
        block=corner[np.ix_(domain, domain)],
        scale=1.0,
        ancilla_dim=r,
        domain=domain,
        err=0.0,
        system_dim=r,
        _builder=build,
        blank_ancilla=blank,
    )
    return WalkUnitary(P.kind, "oracle", P.k, enc, P, amplitudes=A)


def _swap_two_registers(r: int, index_perm) -> sp.csr_matrix:
    """Permutation swapping two ``r``-dimensional registers and permuting an index register.

    ``index_perm`` is either the index-register size (no permutation when 1)
    or an integer array giving the index permutation.
    """
    if isinstance(index_perm, (int, np.integer)):
        perm = np.arange(int(index_perm))
    else:
        perm = np.asarray(index_perm)
    d = len(perm)
    a, b, i = np.meshgrid(np.arange(r), np.arange(r), np.arange(d), indexing="ij")
    src = ((a * r + b) * d + i).ravel()
    dst = ((b * r + a) * d + perm[i]).ravel()
    dim = r * r * d
    return sp.csr_matrix((np.ones(dim), (dst, src)), shape=(dim, dim))


# ----------------------------------------------------------------------
# circuit tier


class IndexSpace:
    """Basis of the index register: ``null``, ``slack`` and ``(a, b, tag)`` triples."""

    NULL = 0
    SLACK = 1

    def __init__(self, n: int):
        self.n = n
        self.size = 2 + 3 * n * n

    def of(self, a: int, b: int, tag: int = 0) -> int:
        return 2 + (tag * self.n + a) * self.n + b

    def label(self, idx: int):
        if idx == self.NULL:
            return "null"
        if idx == self.SLACK:
            return "slack"
        t, rest = divmod(idx - 2, self.n * self.n)
        a, b = divmod(rest, self.n)
        return (a, b, t)

    def swap_permutation(self) -> np.ndarray:
        perm = np.arange(self.size)
        for t in range(3):
            for a in range(self.n):
                for b in range(self.n):
                    perm[self.of(a, b, t)] = self.of(b, a, t)
        return perm

    @property
    def qubits(self) -> int:
        """Bits per vertex slot, plus two bits for the tag."""
        return 2 * max(1, math.ceil(math.log2(self.n + 1))) + 2


def _bits_list(simplex, n: int) -> list[int]:
    bits = [0] * n
    for v in simplex:
        bits[v] = 1
    return bits


def _ones_before(bits, pos: int) -> int:
    return sum(bits[:pos])


def _branches_up(X: CliqueComplex, simplex, s: int):
    """Yield ``(amplitude_sq, target_simplex_or_None, orientation, index)`` for the up-down walk.

    Step through every empty position ``u``, add it, then remove the j-th
    vertex ``v`` of the coface. The orientation picks up the parity of the
    vertices before ``u`` and the parity of ``j``.
    """
    n = X.n
    w = X.weights
    bits = _bits_list(simplex, n)
    for u in [p for p in range(n) if not bits[p]]:
        up_bits = bits.copy()
        up_bits[u] = 1
        coface_invalid = membership(X, up_bits)
        p_iu = _ones_before(bits, u) % 2
        coface_ones = [p for p in range(n) if up_bits[p]]
        for j, v in enumerate(coface_ones):
            amp_sq = w[u] * w[v]
            if coface_invalid:
                yield amp_sq, None, 0, (u, v, 0)
                continue
            target = tuple(p for p in coface_ones if p != v)
            yield amp_sq, target, s ^ p_iu ^ (j % 2), (u, v, 0)


def _branches_down(X: CliqueComplex, simplex, s: int):
    """Remove the i-th vertex ``v``, then add the j-th empty position ``u`` of the face.

    Membership is tested only after returning to dimension k.
    """
    n = X.n
    w = X.weights
    bits = _bits_list(simplex, n)
    ones = [p for p in range(n) if bits[p]]
    for i, v in enumerate(ones):
        face_bits = bits.copy()
        face_bits[v] = 0
        face_s = s ^ (i % 2)
        for u in [p for p in range(n) if not face_bits[p]]:
            amp_sq = w[v] * w[u]
            new_bits = face_bits.copy()
            new_bits[u] = 1
            if membership(X, new_bits):
                yield amp_sq, None, 0, (v, u, 0)
                continue
            orient = face_s ^ (_ones_before(face_bits, u) % 2)
            yield amp_sq, tuple(p for p in range(n) if new_bits[p]), orient, (v, u, 0)


def _branches_harmonic(X: CliqueComplex, simplex, s: int):
    """Three branches: vertex exchange (tag 0), up-degree laziness (tag 1), down-degree laziness (tag 2).

    An exchange survives when the exchanged simplex is a member and the
    coface through the added vertex is not, i.e. the flag
    ``f(exchange) xor f(coface) xor 1`` is 0.
    """
    n = X.n
    w = X.weights
    bits = _bits_list(simplex, n)
    zeros = [p for p in range(n) if not bits[p]]
    ones = [p for p in range(n) if bits[p]]
    for u in zeros:
        up_bits = bits.copy()
        up_bits[u] = 1
        f_up = membership(X, up_bits)
        for v in ones:
            ex_bits = up_bits.copy()
            ex_bits[v] = 0
            flag = membership(X, ex_bits) ^ f_up ^ 1
            if flag:
                yield w[u] * w[v], None, 0, (u, v, 0)
                continue
            lo, hi = sorted((u, v))
            orient = s ^ (sum(bits[lo + 1 : hi]) % 2)
            yield w[u] * w[v], tuple(p for p in range(n) if ex_bits[p]), orient, (u, v, 0)
        if f_up:
            yield w[u] ** 2, None, 0, (u, u, 1)
        else:
            yield w[u] ** 2, tuple(simplex), s, (u, u, 1)
    for v in ones:
        yield w[v] ** 2, tuple(simplex), s, (v, v, 2)


_BRANCHES = {WalkKind.UP: _branches_up, WalkKind.DOWN: _branches_down, WalkKind.HARMONIC: _branches_harmonic}
_BRANCH_COUNT = {WalkKind.UP: 1, WalkKind.DOWN: 1, WalkKind.HARMONIC: 3}


def circuit_amplitudes(X: CliqueComplex, k: int, kind, prep_err: float = 0.0, seed: int = 0):
    """Amplitude tensor ``Psi[control, target, index]`` produced by one circuit application.

    ``prep_err`` multiplies every prepared amplitude by ``1 + prep_err * xi``
    with ``xi`` uniform on ``[-1, 1]``; the prepared state is renormalized
    only if its norm exceeds one. Missing norm goes to ``(sink, slack)``.
    """
    kind = WalkKind(kind)
    if prep_err < 0:
        raise PreconditionError("prep_err must be nonnegative")
    K = normalization_constant(X, k, kind)
    m = X.count(k)
    r = register_size(m)
    idx = IndexSpace(X.n)
    R = _reg(m)
    rng = np.random.default_rng(seed)
    Psi = np.zeros((2 * m + 1, r, idx.size))
    for a, simplex in enumerate(X.basis(k)):
        for s in (0, 1):
            ctrl = a + s * m
            entries = []
            for amp_sq, target, orient, (p, q, tag) in _BRANCHES[kind](X, simplex, s):
                if amp_sq <= 0 or K <= 0:
                    continue
                amp = math.sqrt(amp_sq / K)
                if target is None:
                    t_idx = R["theta"]
                else:
                    t_idx = X.index_of(target, k) + orient * m
                entries.append((t_idx, idx.of(p, q, tag), amp))
            amps = np.array([e[2] for e in entries])
            if prep_err > 0 and len(amps):
                amps = amps * (1 + prep_err * rng.uniform(-1, 1, size=len(amps)))
                norm = np.linalg.norm(amps)
                if norm > 1:
                    amps = amps / norm
            for (t_idx, i_idx, _), amp in zip(entries, amps):
                if Psi[ctrl, t_idx, i_idx] != 0:
                    raise AssertionError("two branches collided on one basis state")
                Psi[ctrl, t_idx, i_idx] = amp
            slack = 1.0 - float(np.sum(amps ** 2))
            Psi[ctrl, R["theta"], idx.SLACK] = math.sqrt(max(slack, 0.0))
    Psi[2 * m, R["theta"], idx.NULL] = 1.0
    return Psi, idx


def _circuit_corner(Psi: np.ndarray, idx: IndexSpace) -> np.ndarray:
    """Corner of ``U^T SWAP U`` between blank-ancilla inputs, over the walk states."""
    perm = idx.swap_permutation()
    S = Psi.shape[0]
    # corner[y, x] = sum_i Psi[x, y, i] * Psi[y, x, perm[i]]
    A = Psi[:, :S, :]
    B = A[:, :, perm]
    return np.einsum("xyi,yxi->yx", A, B)


def operation_count(n: int, k: int, kind, precision: float = 1e-10) -> dict:
    """Primitive-operation tally for one application of a circuit-tier walk unitary.

    Primitives are controlled bit flips, parity accumulations, membership
    pair checks and rotations, each counted once. A weight query costs
    ``n`` times the amplitude bit-width, and the amplitude bit-width is
    ``ceil(log2(1/precision)) + ceil(log2 n)``.
    """
    kind = WalkKind(kind)
    t = math.ceil(math.log2(1 / precision)) + math.ceil(math.log2(max(n, 2)))
    mbits = math.ceil(math.log2(n + 1))
    branches = _BRANCH_COUNT[kind]
    scan = {WalkKind.UP: n - k - 1, WalkKind.DOWN: k + 1, WalkKind.HARMONIC: 1}[kind]
    steps = {
        "positions": n * mbits,
        "secondary_positions": scan * n * mbits,
        "weight_queries": n * n * t,
        "state_preparation": max(branches - 1, 0) * t + n * t,
        "index_writes": branches * 2 * mbits,
        "move_and_flag": 3 * n + 2 * n + n * (n - 1) // 2,
    }
    steps["conditional_uncompute"] = steps["move_and_flag"]
    steps["ancilla_uncompute"] = steps["positions"] + steps["secondary_positions"] + steps["weight_queries"]
    steps["total"] = sum(steps.values())
    steps["amplitude_bits"] = t
    steps["index_qubits"] = 2 * mbits + (2 if branches > 1 else 0)
    return steps


_BUILDERS_MAX_DIM = 3_000_000


def build_circuit_walk(X: CliqueComplex, k: int, kind, prep_err: float = 0.0, seed: int = 0) -> WalkUnitary:
    kind = WalkKind(kind)
    P = transition_matrix(X, k, kind)
    Psi, idx = circuit_amplitudes(X, k, kind, prep_err, seed)
    m = X.count(k)
    r = register_size(m)
    corner_full = _circuit_corner(Psi, idx)
    domain = np.arange(2 * m)
    blank = _reg(m)["blank"]
    anc = r * idx.size

    def build():
        dim = r * anc
        if dim > _BUILDERS_MAX_DIM:
            raise PreconditionError(f"explicit unitary of dimension {dim} exceeds the build limit")
        vecs = {c: Psi[c].reshape(-1) for c in range(2 * m + 1)}
        blank_anc = blank * idx.size + idx.NULL
        U = _householder_blocks(vecs, blank_anc, anc, r)
        S = _swap_two_registers(r, idx.swap_permutation())
        return U.T @ S @ U

    precision = prep_err if prep_err > 0 else 1e-10
    err = float(np.max(np.abs(corner_full[np.ix_(domain, domain)] - P.restricted()), initial=0.0))
    enc = BlockEncodedOperator(
        block=corner_full[np.ix_(domain, domain)],
        scale=1.0,
        ancilla_dim=anc,
        domain=domain,
        err=err,
        system_dim=r,
        _builder=build,
        blank_ancilla=blank * idx.size + idx.NULL,
    )
    cost = operation_count(X.n, k, kind, precision)
    return WalkUnitary(kind.value, "circuit", k, enc, P, cost=cost, amplitudes=Psi, index_labels=idx)


def build_updown_circuit(X: CliqueComplex, k: int, prep_err: float = 0.0, seed: int = 0) -> WalkUnitary:
    return build_circuit_walk(X, k, WalkKind.UP, prep_err, seed)


def build_downup_circuit(X: CliqueComplex, k: int, prep_err: float = 0.0, seed: int = 0) -> WalkUnitary:
    return build_circuit_walk(X, k, WalkKind.DOWN, prep_err, seed)


def build_harmonic_circuit(X: CliqueComplex, k: int, prep_err: float = 0.0, seed: int = 0) -> WalkUnitary:
    return build_circuit_walk(X, k, WalkKind.HARMONIC, prep_err, seed)


def walk_unitary(X: CliqueComplex, k: int, kind, tier: str = "oracle", prep_err: float = 0.0, seed: int = 0) -> WalkUnitary:
    if tier == "oracle":
        return szegedy_dilation(transition_matrix(X, k, kind))
    if tier == "circuit":
        return build_circuit_walk(X, k, kind, prep_err, seed)
    raise PreconditionError(f"unknown tier {tier!r}")


# ----------------------------------------------------------------------
# Laplacian encoding


def laplacian_encoding(W: WalkUnitary) -> BlockEncodedOperator:
    """Apply the orientation Hadamard after the walk and keep the positive-simplex corner.

    The corner is ``(W[y+, x+] - W[y-, x+]) / sqrt(2)``, which equals the
    matching Laplacian divided by ``sqrt(2) K``. ``scale`` is ``sqrt(2) K``.
    """
    m = W.transition.n_k
    corner = W.encoding.block  # over X+ then X-
    block = (corner[:m, :m] - corner[m:, :m]) / math.sqrt(2)
    K = W.transition.K
    r = register_size(m)
    base = W.encoding

    def build():
        U = base.unitary()
        H = sp.kron(hz_gate(m), sp.identity(base.ancilla_dim, format="csr"), format="csr")
        return H @ U

    return BlockEncodedOperator(
        block=block,
        scale=math.sqrt(2) * K,
        ancilla_dim=base.ancilla_dim,
        domain=np.arange(m),
        err=base.err,
        system_dim=r,
        _builder=build,
        blank_ancilla=base.blank_ancilla,
    )


def laplacian_block(X: CliqueComplex, k: int, kind, tier: str = "oracle", prep_err: float = 0.0, seed: int = 0) -> BlockEncodedOperator:
    return laplacian_encoding(walk_unitary(X, k, kind, tier, prep_err, seed))
