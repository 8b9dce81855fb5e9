"""Vertex-weighted clique complexes and oriented-simplex bookkeeping.

Vertices are 0-indexed throughout. Bit strings are written with vertex 0 as
the leftmost character, so the triangle ``[0, 2, 3]`` over five vertices is
``"10110"``. A positively oriented simplex lists its vertices in ascending
order; every other ordering is positive or negative according to the parity
of the permutation that sorts it.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from itertools import combinations
from pathlib import Path
from typing import Iterator, Sequence

import numpy as np

from .errors import PreconditionError

Simplex = tuple[int, ...]


class _Theta:
    """The absorbing state of every walk."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "THETA"

    def __str__(self) -> str:
        return "Θ"


THETA = _Theta()


@dataclass(frozen=True, eq=False)
class VertexWeightedGraph:
    """Undirected simple graph with positive vertex weights."""

    n: int
    adjacency: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        adj = np.asarray(self.adjacency, dtype=bool)
        w = np.asarray(self.weights, dtype=float)
        if adj.shape != (self.n, self.n):
            raise PreconditionError(f"adjacency must be {self.n}x{self.n}, got {adj.shape}")
        if w.shape != (self.n,):
            raise PreconditionError(f"expected {self.n} weights, got shape {w.shape}")
        if not np.array_equal(adj, adj.T):
            raise PreconditionError("adjacency is not symmetric")
        if adj.diagonal().any():
            raise PreconditionError("adjacency has self-loops")
        if not np.all(np.isfinite(w)) or np.any(w <= 0):
            raise PreconditionError("vertex weights must be finite and positive")
        adj = adj.copy()
        w = w.copy()
        adj.setflags(write=False)
        w.setflags(write=False)
        object.__setattr__(self, "adjacency", adj)
        object.__setattr__(self, "weights", w)

    @classmethod
    def from_edges(cls, n: int, edges, weights=None) -> "VertexWeightedGraph":
        adj = np.zeros((n, n), dtype=bool)
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise PreconditionError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise PreconditionError(f"self-loop at vertex {u}")
            adj[u, v] = adj[v, u] = True
        if weights is None:
            weights = np.ones(n)
        return cls(n, adj, np.asarray(weights, dtype=float))

    @property
    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u, v in combinations(range(self.n), 2) if self.adjacency[u, v]]

    def to_dict(self) -> dict:
        return {"n": self.n, "edges": [list(e) for e in self.edges], "weights": self.weights.tolist()}


def graph_from_dict(doc: dict) -> VertexWeightedGraph:
    """Parse ``{"n": int, "edges": [[u, v], ...], "weights": [...]}``."""
    try:
        n = int(doc["n"])
        edges = [tuple(int(a) for a in e) for e in doc.get("edges", [])]
    except (KeyError, TypeError, ValueError) as exc:
        raise PreconditionError(f"malformed graph document: {exc}") from exc
    if any(len(e) != 2 for e in edges):
        raise PreconditionError("every edge must have exactly two endpoints")
    return VertexWeightedGraph.from_edges(n, edges, doc.get("weights"))


def load_graph(path: str | Path) -> VertexWeightedGraph:
    with open(path) as fh:
        return graph_from_dict(json.load(fh))


@dataclass(frozen=True)
class OrientedSimplexLabel:
    """Basis label ``(x, s, theta)`` of the walk state space.

    ``x`` is the vertex-membership bit string, ``s`` the orientation bit
    (0 positive, 1 negative) and ``theta`` flags the absorbing state.
    """

    x: str
    s: int = 0
    theta: int = 0

    def __post_init__(self):
        if set(self.x) - {"0", "1"}:
            raise PreconditionError(f"bit string {self.x!r} has characters other than 0/1")
        if self.s not in (0, 1) or self.theta not in (0, 1):
            raise PreconditionError("orientation and absorbing flags must be bits")
        if self.theta == 1 and (self.s != 0 or "1" in self.x):
            raise PreconditionError("the absorbing label must be (0^n, 0, 1)")

    @property
    def n(self) -> int:
        return len(self.x)

    @property
    def is_absorbing(self) -> bool:
        return self.theta == 1

    @property
    def vertices(self) -> Simplex:
        return tuple(i for i, b in enumerate(self.x) if b == "1")

    @property
    def dim(self) -> int:
        return len(self.vertices) - 1

    def flipped(self) -> "OrientedSimplexLabel":
        if self.is_absorbing:
            raise PreconditionError("the absorbing state has no opposite orientation")
        return OrientedSimplexLabel(self.x, 1 - self.s, 0)

    def __str__(self) -> str:
        if self.is_absorbing:
            return "Θ"
        vs = list(self.vertices)
        if self.s and len(vs) > 1:
            vs[0], vs[1] = vs[1], vs[0]
        body = ",".join(map(str, vs))
        return f"-[{body}]" if self.s and len(vs) == 1 else f"[{body}]"


def bits_of(vertices, n: int) -> str:
    chars = ["0"] * n
    for v in vertices:
        chars[v] = "1"
    return "".join(chars)


def permutation_parity(seq: Sequence[int]) -> int:
    """Parity (0 even, 1 odd) of the permutation that sorts ``seq``."""
    seq = list(seq)
    inversions = sum(1 for a, b in combinations(range(len(seq)), 2) if seq[a] > seq[b])
    return inversions % 2


class Relation(str, Enum):
    SIMILAR = "similar"
    DISSIMILAR = "dissimilar"
    NONE = "none"


@dataclass(frozen=True)
class AdjacencyVerdict:
    up: Relation
    down: Relation


@dataclass(frozen=True, eq=False)
class CliqueComplex:
    """The ``k_max``-skeleton of the clique complex of ``graph``.

    ``bases[k]`` lists the positively oriented k-simplices as ascending
    vertex tuples in lexicographic order.
    """

    graph: VertexWeightedGraph
    k_max: int
    bases: tuple[tuple[Simplex, ...], ...]
    _index: tuple[dict, ...] = field(repr=False)

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def weights(self) -> np.ndarray:
        return self.graph.weights

    def basis(self, k: int) -> tuple[Simplex, ...]:
        if 0 <= k <= self.k_max:
            return self.bases[k]
        return ()

    def count(self, k: int) -> int:
        return len(self.basis(k))

    @property
    def counts(self) -> list[int]:
        return [len(b) for b in self.bases]

    def index_of(self, simplex: Simplex, k: int | None = None) -> int:
        simplex = tuple(sorted(simplex))
        k = len(simplex) - 1 if k is None else k
        return self._index[k][simplex]

    def contains(self, simplex) -> bool:
        simplex = tuple(sorted(simplex))
        k = len(simplex) - 1
        return 0 <= k <= self.k_max and simplex in self._index[k]

    def simplex_weight(self, simplex) -> float:
        return float(np.prod(self.weights[list(simplex)]))


def build_clique_complex(graph: VertexWeightedGraph, k_max: int | None = None) -> CliqueComplex:
    """Enumerate every clique of up to ``k_max + 1`` vertices.

    With ``k_max=None`` the full clique complex is built.
    """
    n = graph.n
    if k_max is None:
        k_max = n - 1
        truncate = True
    else:
        truncate = False
        if not 0 <= k_max <= max(n - 1, 0):
            raise PreconditionError(f"k_max={k_max} must lie in [0, n-1] for n={n}")
    adj = graph.adjacency
    layers: list[list[Simplex]] = [[(v,) for v in range(n)]]
    while len(layers) <= k_max:
        nxt = []
        for s in layers[-1]:
            for u in range(s[-1] + 1, n):
                if all(adj[v, u] for v in s):
                    nxt.append(s + (u,))
        if not nxt and truncate:
            break
        layers.append(nxt)
    if truncate:
        k_max = len(layers) - 1
    bases = tuple(tuple(layer) for layer in layers)
    index = tuple({s: i for i, s in enumerate(layer)} for layer in bases)
    return CliqueComplex(graph, k_max, bases, index)


def membership(X: CliqueComplex, x: str | Sequence[int]) -> int:
    """Return 0 if ``x`` spells a simplex of ``X`` and 1 otherwise.

    Every vertex pair is checked against the adjacency relation, so the cost
    is quadratic in the number of vertices. Strings heavier than
    ``k_max + 1`` are rejected because ``X`` is truncated there.
    """
    bits = _as_bits(x, X.n)
    verts = [i for i, b in enumerate(bits) if b]
    if not verts or len(verts) - 1 > X.k_max:
        return 1
    adj = X.graph.adjacency
    for a, b in combinations(verts, 2):
        if not adj[a, b]:
            return 1
    return 0


def _as_bits(x, n: int | None = None) -> tuple[int, ...]:
    if isinstance(x, OrientedSimplexLabel):
        x = x.x
    if isinstance(x, str):
        if set(x) - {"0", "1"}:
            raise PreconditionError(f"bit string {x!r} has characters other than 0/1")
        bits = tuple(int(c) for c in x)
    else:
        bits = tuple(int(b) for b in x)
    if n is not None and len(bits) != n:
        raise PreconditionError(f"expected a {n}-bit string, got {len(bits)} bits")
    return bits


def encode_label(sigma, n: int, X: CliqueComplex | None = None) -> OrientedSimplexLabel:
    """Label of an oriented simplex given as a vertex sequence, or of THETA.

    When ``X`` is supplied, vertex sets outside the complex are rejected.
    """
    if sigma is THETA:
        return OrientedSimplexLabel("0" * n, 0, 1)
    verts = [int(v) for v in sigma]
    if not verts:
        raise PreconditionError("a simplex needs at least one vertex")
    if len(set(verts)) != len(verts):
        raise PreconditionError(f"repeated vertex in {verts}")
    if min(verts) < 0 or max(verts) >= n:
        raise PreconditionError(f"vertex out of range in {verts} for n={n}")
    x = bits_of(verts, n)
    if X is not None and membership(X, x):
        raise PreconditionError(f"{sorted(verts)} is not a simplex of the complex")
    return OrientedSimplexLabel(x, permutation_parity(verts), 0)


def decode_label(label: OrientedSimplexLabel):
    """Inverse of :func:`encode_label`: a vertex tuple (negatives swap the first pair) or THETA."""
    if label.is_absorbing:
        return THETA
    verts = list(label.vertices)
    if label.s:
        if len(verts) < 2:
            raise PreconditionError("a 0-simplex has no negative orientation")
        verts[0], verts[1] = verts[1], verts[0]
    return tuple(verts)


def _signed(label: OrientedSimplexLabel) -> tuple[Simplex, int]:
    return label.vertices, -1 if label.s else 1


def adjacency(X: CliqueComplex, sigma: OrientedSimplexLabel, tau: OrientedSimplexLabel) -> AdjacencyVerdict:
    """Classify up- and down-adjacency of two oriented k-simplices.

    A simplex induces on its coface the orientation ``sign * (-1)**j`` where
    ``j`` is the slot of the added vertex, and on its face the orientation
    ``sign * (-1)**j`` where ``j`` is the slot of the removed vertex.
    """
    a, sa = _signed(sigma)
    b, sb = _signed(tau)
    if len(a) != len(b):
        raise PreconditionError("simplices of different dimension")
    if set(a) == set(b):
        raise PreconditionError("adjacency is defined for distinct unoriented simplices")
    common = sorted(set(a) & set(b))
    if len(common) != len(a) - 1:
        return AdjacencyVerdict(Relation.NONE, Relation.NONE)
    (va,) = set(a) - set(common)
    (vb,) = set(b) - set(common)

    up = Relation.NONE
    coface = tuple(sorted(set(a) | set(b)))
    if X.contains(coface):
        ind_a = sa * (-1) ** coface.index(vb)
        ind_b = sb * (-1) ** coface.index(va)
        up = Relation.SIMILAR if ind_a == ind_b else Relation.DISSIMILAR

    down = Relation.NONE
    if common:
        ind_a = sa * (-1) ** a.index(va)
        ind_b = sb * (-1) ** b.index(vb)
        down = Relation.SIMILAR if ind_a == ind_b else Relation.DISSIMILAR
    return AdjacencyVerdict(up, down)


def relative_down_orientation(x, v_out: int, v_in: int) -> int:
    """Orientation flip when ``v_out`` is exchanged for ``v_in`` through the common face.

    This is the parity of the 1-bits of ``x`` strictly between the two
    positions.
    """
    bits = _as_bits(x)
    if v_out == v_in:
        raise PreconditionError("v_out and v_in must differ")
    if not (0 <= v_out < len(bits) and 0 <= v_in < len(bits)):
        raise PreconditionError("vertex out of range")
    if bits[v_out] != 1 or bits[v_in] != 0:
        raise PreconditionError("x must contain v_out and not v_in")
    lo, hi = sorted((v_out, v_in))
    return sum(bits[lo + 1:hi]) % 2


@dataclass(frozen=True)
class LocalStructure:
    """Positions and weight products around one k-simplex.

    ``up_down_weights[i, j]`` is ``w(i-th zero) * w(j-th one of the i-th
    coface string)``; ``down_up_weights[i, j]`` is ``w(i-th one) * w(j-th
    zero of the i-th face string)``. All positions are 0-based vertices.
    """

    zero_positions: tuple[int, ...]
    one_positions: tuple[int, ...]
    coface_strings: tuple[str, ...]
    face_strings: tuple[str, ...]
    up_down_weights: np.ndarray
    down_up_weights: np.ndarray


def coface_and_face_indices(X: CliqueComplex, sigma) -> LocalStructure:
    if isinstance(sigma, OrientedSimplexLabel):
        if sigma.is_absorbing:
            raise PreconditionError("the absorbing state has no faces")
        bits = _as_bits(sigma.x, X.n)
    else:
        bits = _as_bits(bits_of(sigma, X.n))
    w = X.weights
    n = X.n
    zeros = tuple(i for i in range(n) if not bits[i])
    ones = tuple(i for i in range(n) if bits[i])
    cofaces, faces = [], []
    up_down = np.empty((len(zeros), len(ones) + 1))
    down_up = np.empty((len(ones), len(zeros) + 1))
    for i, u in enumerate(zeros):
        flipped = list(bits)
        flipped[u] = 1
        cofaces.append("".join(map(str, flipped)))
        coface_ones = [p for p in range(n) if flipped[p]]
        up_down[i] = w[u] * w[coface_ones]
    for i, v in enumerate(ones):
        flipped = list(bits)
        flipped[v] = 0
        faces.append("".join(map(str, flipped)))
        face_zeros = [p for p in range(n) if not flipped[p]]
        down_up[i] = w[v] * w[face_zeros]
    return LocalStructure(zeros, ones, tuple(cofaces), tuple(faces), up_down, down_up)


def exchange_neighbors(X: CliqueComplex, simplex: Simplex) -> Iterator[tuple[int, int, Simplex]]:
    """Yield ``(v_out, v_in, neighbor)`` for every member reached by swapping one vertex."""
    simplex = tuple(simplex)
    inside = set(simplex)
    for v in simplex:
        rest = [a for a in simplex if a != v]
        for u in range(X.n):
            if u in inside:
                continue
            cand = tuple(sorted(rest + [u]))
            if X.contains(cand):
                yield v, u, cand
