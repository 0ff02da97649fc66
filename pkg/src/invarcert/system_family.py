"""Parametric discrete-time LTI families ``delta -> (A(delta), B(delta))``.

Three kinds are supported:

* :class:`NetworkFamily` -- weighted-consensus dynamics on an undirected
  graph whose edge weights are the uncertain parameter: with incidence
  blocks ``D_F`` (floating nodes) and ``D_I`` (input nodes),
  ``A(w) = I - D_F diag(w) D_F.T`` and ``B(w) = -D_F diag(w) D_I.T``.
* :class:`AffineFamily` -- matrices affine in the parameter vector.
* :class:`TableFamily` -- an explicit list of measured ``(A, B)``
  snapshots, addressed by index (parameter dimension 1).

All families are immutable and ``instantiate`` is pure.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, InvarcertError


class GraphError(InvarcertError, ValueError):
    pass


class NoFloatingNodes(GraphError):
    pass


class NoInputNodes(GraphError):
    pass


class UnknownSample(InvarcertError, KeyError):
    pass


class ConvergenceFailure(InvarcertError, ArithmeticError):
    pass


@dataclass(frozen=True)
class Graph:
    """Undirected weighted graph with a floating / input node split.

    Nodes are ``0 .. n-1``; every node must appear in exactly one of
    ``floating`` or ``inputs``.  Edges are stored with the deterministic
    orientation (smaller node -> larger node); the consensus matrices are
    orientation-invariant anyway.
    """

    edges: tuple
    floating: tuple
    inputs: tuple
    nominal_weights: np.ndarray

    def __init__(self, edges, floating, inputs, nominal_weights):
        edges = tuple(
            (min(int(i), int(j)), max(int(i), int(j))) for i, j in edges
        )
        floating = tuple(sorted(int(i) for i in floating))
        inputs = tuple(sorted(int(i) for i in inputs))
        w = np.array(nominal_weights, dtype=float).ravel()
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "floating", floating)
        object.__setattr__(self, "inputs", inputs)
        w.setflags(write=False)
        object.__setattr__(self, "nominal_weights", w)
        self._validate()

    def _validate(self):
        if not self.floating:
            raise NoFloatingNodes("graph needs at least one floating node")
        if not self.inputs:
            raise NoInputNodes("graph needs at least one input node")
        nodes = set(self.floating) | set(self.inputs)
        if set(self.floating) & set(self.inputs):
            raise GraphError("floating and input node sets overlap")
        n = len(nodes)
        if nodes != set(range(n)):
            raise GraphError("nodes must be exactly 0..n-1 across the two sets")
        for i, j in self.edges:
            if i == j:
                raise GraphError(f"self-loop on node {i}")
            if i not in nodes or j not in nodes:
                raise GraphError(f"edge ({i},{j}) references unknown node")
        if self.nominal_weights.size != len(self.edges):
            raise DimensionMismatch(
                f"{len(self.edges)} edges but {self.nominal_weights.size} nominal weights"
            )
        # connectivity by traversal
        adjacency = {v: set() for v in nodes}
        for i, j in self.edges:
            adjacency[i].add(j)
            adjacency[j].add(i)
        seen = {0}
        stack = [0]
        while stack:
            for nxt in adjacency[stack.pop()]:
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
        if seen != nodes:
            raise GraphError("graph is not connected")

    @property
    def node_count(self) -> int:
        return len(self.floating) + len(self.inputs)

    @property
    def edge_count(self) -> int:
        return len(self.edges)


def build_incidence(g: Graph):
    """Signed incidence blocks ``(D_F, D_I)``: +1 at the smaller endpoint,
    -1 at the larger, one column per edge; rows ordered by ascending node
    id within each block."""
    n = g.node_count
    D = np.zeros((n, g.edge_count))
    for e, (i, j) in enumerate(g.edges):
        D[i, e] = 1.0
        D[j, e] = -1.0
    return D[list(g.floating), :], D[list(g.inputs), :]


@dataclass(frozen=True)
class NetworkFamily:
    """Consensus family on a graph; the parameter is the edge-weight vector."""

    graph: Graph
    _d_floating: np.ndarray = field(repr=False, default=None)
    _d_input: np.ndarray = field(repr=False, default=None)

    def __post_init__(self):
        d_f, d_i = build_incidence(self.graph)
        d_f.setflags(write=False)
        d_i.setflags(write=False)
        object.__setattr__(self, "_d_floating", d_f)
        object.__setattr__(self, "_d_input", d_i)

    @property
    def n(self) -> int:
        return len(self.graph.floating)

    @property
    def m(self) -> int:
        return len(self.graph.inputs)

    @property
    def ell(self) -> int:
        return self.graph.edge_count

    @property
    def nominal_delta(self) -> np.ndarray:
        return self.graph.nominal_weights

    def instantiate(self, delta):
        w = np.asarray(delta, dtype=float).ravel()
        if w.size != self.ell:
            raise DimensionMismatch(f"expected {self.ell} weights, got {w.size}")
        DFw = self._d_floating * w  # D_F @ diag(w)
        A = np.eye(self.n) - DFw @ self._d_floating.T
        B = -DFw @ self._d_input.T
        return A, B


def build_network_family(g: Graph) -> NetworkFamily:
    return NetworkFamily(graph=g)


@dataclass(frozen=True)
class AffineFamily:
    """``A(delta) = A0 + sum_k delta_k A_k`` and likewise for ``B``."""

    A0: np.ndarray
    B0: np.ndarray
    A_terms: tuple = ()
    B_terms: tuple = ()

    def __init__(self, A0, B0, A_terms=(), B_terms=()):
        A0 = np.array(A0, dtype=float)
        B0 = np.array(B0, dtype=float)
        if B0.ndim == 1:
            B0 = B0[:, None]
        if A0.ndim != 2 or A0.shape[0] != A0.shape[1]:
            raise DimensionMismatch("A0 must be square")
        if B0.shape[0] != A0.shape[0]:
            raise DimensionMismatch("B0 row count must match A0")
        A_terms = tuple(np.array(t, dtype=float) for t in A_terms)
        B_terms = tuple(np.array(t, dtype=float).reshape(B0.shape) for t in B_terms)
        for t in A_terms:
            if t.shape != A0.shape:
                raise DimensionMismatch("every A term must match A0's shape")
        if A_terms and B_terms and len(A_terms) != len(B_terms):
            raise DimensionMismatch("A and B term counts differ")
        for a in (A0, B0) + A_terms + B_terms:
            a.setflags(write=False)
        object.__setattr__(self, "A0", A0)
        object.__setattr__(self, "B0", B0)
        object.__setattr__(self, "A_terms", A_terms)
        object.__setattr__(self, "B_terms", B_terms)

    @property
    def n(self) -> int:
        return self.A0.shape[0]

    @property
    def m(self) -> int:
        return self.B0.shape[1]

    @property
    def ell(self) -> int:
        return max(len(self.A_terms), len(self.B_terms))

    @property
    def nominal_delta(self) -> np.ndarray:
        return np.zeros(self.ell)

    def instantiate(self, delta):
        d = np.asarray(delta, dtype=float).ravel()
        if d.size != self.ell:
            raise DimensionMismatch(f"expected {self.ell} parameters, got {d.size}")
        A = self.A0.copy()
        for coeff, term in zip(d, self.A_terms):
            A += coeff * term
        B = self.B0.copy()
        for coeff, term in zip(d, self.B_terms):
            B += coeff * term
        return A, B


@dataclass(frozen=True)
class TableFamily:
    """Measured (A, B) snapshots addressed by integer index.

    The scenario machinery treats the index as a parameter of dimension 1,
    so affine policies over a table reduce to per-snapshot interpolation.
    """

    pairs: tuple

    def __init__(self, pairs):
        stored = []
        shape = None
        for A, B in pairs:
            A = np.array(A, dtype=float)
            B = np.array(B, dtype=float)
            if B.ndim == 1:
                B = B[:, None]
            if shape is None:
                shape = (A.shape, B.shape)
            elif (A.shape, B.shape) != shape:
                raise DimensionMismatch("all table entries must share shapes")
            A.setflags(write=False)
            B.setflags(write=False)
            stored.append((A, B))
        if not stored:
            raise ValueError("table must contain at least one (A, B) pair")
        if stored[0][0].shape[0] != stored[0][0].shape[1]:
            raise DimensionMismatch("A must be square")
        object.__setattr__(self, "pairs", tuple(stored))

    @property
    def n(self) -> int:
        return self.pairs[0][0].shape[0]

    @property
    def m(self) -> int:
        return self.pairs[0][1].shape[1]

    @property
    def ell(self) -> int:
        return 1

    @property
    def nominal_delta(self) -> np.ndarray:
        return np.zeros(1)

    def instantiate(self, delta):
        d = np.asarray(delta, dtype=float).ravel()
        if d.size != 1:
            raise DimensionMismatch("table families take a single index parameter")
        idx = float(d[0])
        if abs(idx - round(idx)) > 1e-9:
            raise UnknownSample(f"non-integral table index {idx}")
        k = int(round(idx))
        if not 0 <= k < len(self.pairs):
            raise UnknownSample(f"table index {k} out of range")
        return self.pairs[k]


def instantiate(family, delta):
    """Functional form of ``family.instantiate(delta)``."""
    return family.instantiate(delta)


def spectral_radius_estimate(A, tol: float = 1e-9) -> float:
    """Largest eigenvalue modulus of a square matrix (diagnostic only).

    Backed by LAPACK's Hessenberg-QR eigensolver; ``tol`` is kept for
    interface stability and a :class:`ConvergenceFailure` is raised if the
    QR iteration does not converge.
    """
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DimensionMismatch("A must be square")
    if A.size == 0:
        return 0.0
    try:
        eigs = np.linalg.eigvals(A)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(str(exc)) from exc
    return float(np.abs(eigs).max())
