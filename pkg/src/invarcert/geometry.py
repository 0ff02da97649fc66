"""Dual-representation polytopes with the origin in their interior.

A :class:`Polytope` carries both a facet matrix ``F`` (half-space form
``F x <= 1``, unit right-hand side) and an explicit vertex list.  The two
representations are validated against each other rather than converted:
facet/vertex enumeration is exponential in general, and every routine in
this package needs both forms anyway.

Besides membership tests, the module provides the gauge function
``minkowski_gauge`` (smallest ``lam >= 0`` with ``x in lam * P``) and the
minimal vertex decomposition used by the vertex control law.
"""

import itertools
from dataclasses import dataclass

import numpy as np

from . import lp_core
from .errors import DimensionMismatch, InvarcertError

DEFAULT_TOL = 1e-8


class PolytopeError(InvarcertError, ValueError):
    """Base class for polytope validation failures."""


class RankDeficientFacets(PolytopeError):
    pass


class VertexOutsideFacets(PolytopeError):
    def __init__(self, vertex: int, row: int, slack: float):
        self.vertex, self.row, self.slack = vertex, row, slack
        super().__init__(
            f"vertex {vertex} violates facet row {row} by {slack:.3e}"
        )


class UnsupportedFacet(PolytopeError):
    def __init__(self, row: int, reach: float):
        self.row, self.reach = row, reach
        super().__init__(
            f"facet row {row} is never tight (max F x over vertices = {reach:.6g} < 1)"
        )


class OriginNotInterior(PolytopeError):
    pass


class PolytopeValidationError(PolytopeError):
    """Aggregates every violated invariant found during validation."""

    def __init__(self, issues):
        self.issues = list(issues)
        super().__init__(
            "; ".join(str(issue) for issue in self.issues) or "invalid polytope"
        )


class DecompositionInfeasible(InvarcertError):
    pass


@dataclass(frozen=True)
class Polytope:
    """C-polytope ``{x | F x <= 1}`` together with its vertex list.

    Instances are produced by :func:`validate_polytope` or :func:`box` and
    are immutable afterwards; the arrays are marked read-only so values can
    be shared freely across threads.
    """

    facets: np.ndarray  # (p, n)
    vertices: np.ndarray  # (N, n)

    @property
    def dim(self) -> int:
        return self.facets.shape[1]

    @property
    def facet_count(self) -> int:
        return self.facets.shape[0]

    @property
    def vertex_count(self) -> int:
        return self.vertices.shape[0]


def _freeze(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


def validate_polytope(facets, vertices, tol: float = DEFAULT_TOL, rhs=None) -> Polytope:
    """Validate a facet matrix / vertex list pair and return a Polytope.

    ``rhs``, when given, is a positive right-hand side vector; rows are
    rescaled to the unit form ``F x <= 1`` before checking.  On failure,
    raises the specific error when a single invariant is violated, or a
    :class:`PolytopeValidationError` listing all of them.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    F = np.array(facets, dtype=float)
    X = np.array(vertices, dtype=float)
    if F.ndim != 2 or X.ndim != 2:
        raise DimensionMismatch("facets and vertices must be 2-d arrays")
    if F.shape[1] != X.shape[1]:
        raise DimensionMismatch(
            f"facet columns ({F.shape[1]}) != vertex dimension ({X.shape[1]})"
        )
    if rhs is not None:
        b = np.asarray(rhs, dtype=float).ravel()
        if b.size != F.shape[0]:
            raise DimensionMismatch("rhs length must match facet rows")
        if np.any(b <= 0):
            raise OriginNotInterior("right-hand side must be strictly positive")
        F = F / b[:, None]

    issues = []
    n = F.shape[1]
    if np.linalg.matrix_rank(F) < n:
        issues.append(RankDeficientFacets(f"facet matrix rank < {n}"))

    values = X @ F.T  # (N, p)
    over = values - 1.0
    for v, k in zip(*np.nonzero(over > tol)):
        issues.append(VertexOutsideFacets(int(v), int(k), float(over[v, k])))

    reach = values.max(axis=0)
    for k in np.flatnonzero(reach < 1.0 - tol):
        issues.append(UnsupportedFacet(int(k), float(reach[k])))

    if not _origin_in_hull(X, tol):
        issues.append(OriginNotInterior("origin is not in the vertex hull"))

    if issues:
        raise issues[0] if len(issues) == 1 else PolytopeValidationError(issues)
    return Polytope(facets=_freeze(F), vertices=_freeze(X))


def _origin_in_hull(X: np.ndarray, tol: float) -> bool:
    # 0 = sum lam_i x_i with lam >= 0, sum lam = 1, checked by LP phase 1
    N = X.shape[0]
    A_eq = np.vstack([X.T, np.ones((1, N))])
    b_eq = np.concatenate([np.zeros(X.shape[1]), [1.0]])
    lp = lp_core.LinearProgram(
        c=np.zeros(N),
        A_in=np.zeros((0, N)),
        b_in=np.zeros(0),
        A_eq=A_eq,
        b_eq=b_eq,
        bounds=[(0.0, None)] * N,
    )
    return lp_core.solve(lp, feas_tol=max(tol, 1e-9)).is_optimal


def box(lower, upper) -> Polytope:
    """Axis-aligned box with both representations, origin strictly inside.

    Requires ``lower < 0 < upper`` componentwise so the unit-RHS facet form
    exists.  Vertices are ordered as ``itertools.product`` of the per-axis
    (lower, upper) pairs.
    """
    lo = np.asarray(lower, dtype=float).ravel()
    hi = np.asarray(upper, dtype=float).ravel()
    if lo.size != hi.size:
        raise DimensionMismatch("lower and upper lengths differ")
    if np.any(lo >= 0) or np.any(hi <= 0):
        raise OriginNotInterior("box must satisfy lower < 0 < upper")
    n = lo.size
    F = np.vstack([np.diag(1.0 / hi), np.diag(1.0 / lo)])
    verts = np.array(list(itertools.product(*zip(lo, hi))), dtype=float)
    return Polytope(facets=_freeze(F), vertices=_freeze(verts))


def contains(P: Polytope, x, tol: float = DEFAULT_TOL) -> bool:
    """True iff ``F x <= (1 + tol)`` componentwise."""
    x = np.asarray(x, dtype=float).ravel()
    if x.size != P.dim:
        raise DimensionMismatch(f"point has dimension {x.size}, expected {P.dim}")
    return bool(np.all(P.facets @ x <= 1.0 + tol))


def minkowski_gauge(P: Polytope, x) -> float:
    """Gauge of ``x``: max(0, max_k (F x)_k).  <= 1 exactly on ``P``."""
    x = np.asarray(x, dtype=float).ravel()
    if x.size != P.dim:
        raise DimensionMismatch(f"point has dimension {x.size}, expected {P.dim}")
    return float(max(0.0, (P.facets @ x).max()))


def vertex_decompose(P: Polytope, x, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Minimal-weight vertex decomposition of a point of ``P``.

    Returns ``gamma >= 0`` with ``sum_i gamma_i vertex_i = x`` and
    ``sum(gamma) = minkowski_gauge(P, x)``; ties are settled by the LP
    core's deterministic pivoting.  The bound ``gamma_i <= 1`` is implied
    by the gauge being <= 1 and is not imposed explicitly.
    """
    x = np.asarray(x, dtype=float).ravel()
    if x.size != P.dim:
        raise DimensionMismatch(f"point has dimension {x.size}, expected {P.dim}")
    if minkowski_gauge(P, x) > 1.0 + tol:
        raise DecompositionInfeasible(f"point outside polytope beyond tol={tol}")
    N = P.vertex_count
    lp = lp_core.LinearProgram(
        c=np.ones(N),
        A_in=np.zeros((0, N)),
        b_in=np.zeros(0),
        A_eq=P.vertices.T,
        b_eq=x,
        bounds=[(0.0, None)] * N,
    )
    outcome = lp_core.solve(lp, feas_tol=max(tol, 1e-9))
    if not outcome.is_optimal:
        raise DecompositionInfeasible("no nonnegative vertex combination reaches x")
    gamma = np.maximum(outcome.z, 0.0)
    return gamma
