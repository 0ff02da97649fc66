"""Minor-enumeration feasibility checks for the vertex constraint blocks.

For one sample the vertex block ``{u : G u <= l}`` with
``G = col(H, F B)`` is nonempty iff some invertible m-by-m row submatrix
``G_I`` exists whose basic point ``G_I^{-1} l_I`` satisfies the remaining
rows.  Exhaustively enumerating the m-row subsets therefore decides
feasibility exactly (single sample) and gives a necessary condition when
quantified over all samples: one failing (vertex, sample) pair certifies
that no common policy exists, while passing proves nothing beyond the
per-sample blocks.
"""

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, InvarcertError
from .geometry import Polytope

DET_TOL = 1e-10
ENUMERATION_CAP = 1_000_000


class EnumerationCapExceeded(InvarcertError):
    pass


class DimensionPrecondition(InvarcertError):
    """The check requires state dimension >= input dimension."""


@dataclass(frozen=True)
class MinorWitness:
    """Invertible row minor certifying feasibility of one vertex block."""

    vertex: int
    sample: int
    input_rows: tuple  # indices into the rows of H
    image_rows: tuple  # indices into the rows of F B
    submatrix: np.ndarray  # (m, m)
    point: np.ndarray  # submatrix^{-1} l restricted to the chosen rows


@dataclass(frozen=True)
class SingleSampleResult:
    feasible: bool
    witnesses: tuple  # one MinorWitness per vertex when feasible
    failed_vertex: int | None = None


@dataclass(frozen=True)
class MultisampleResult:
    passed: bool
    first_failure: tuple | None = None  # (vertex, sample)


def _check_vertex(G, l, q, det_tol, tol, vertex, sample) -> MinorWitness | None:
    """First (lexicographic) satisfying minor of one vertex block, or None."""
    total, m = G.shape
    for subset in itertools.combinations(range(total), m):
        sub = G[list(subset)]
        # LU with partial pivoting underlies both the det and the solve
        if abs(np.linalg.det(sub)) <= det_tol:
            continue
        point = np.linalg.solve(sub, l[list(subset)])
        residual = G @ point - l
        residual[list(subset)] = 0.0
        if np.all(residual <= tol):
            return MinorWitness(
                vertex=vertex,
                sample=sample,
                input_rows=tuple(k for k in subset if k < q),
                image_rows=tuple(k - q for k in subset if k >= q),
                submatrix=sub,
                point=point,
            )
    return None


def single_sample_iff(
    family,
    S: Polytope,
    U: Polytope,
    delta,
    det_tol: float = DET_TOL,
    tol: float = 1e-8,
    *,
    sample_index: int = 0,
    cap: int = ENUMERATION_CAP,
) -> SingleSampleResult:
    """Exact feasibility of the single-sample program by minor enumeration.

    Equivalent to LP feasibility of every vertex block; the returned
    witnesses carry the certifying basic points.  Requires n >= m and an
    enumeration budget of at most ``cap`` subsets per vertex.
    """
    A, B = family.instantiate(delta)
    n, m = A.shape[0], B.shape[1]
    if n < m:
        raise DimensionPrecondition(f"requires n >= m, got n={n}, m={m}")
    q, p = U.facet_count, S.facet_count
    if math.comb(q + p, m) > cap:
        raise EnumerationCapExceeded(
            f"{math.comb(q + p, m)} row subsets exceed the cap of {cap}"
        )
    if U.dim != m or S.dim != n:
        raise DimensionMismatch("family dimensions do not match S and U")

    G = np.vstack([U.facets, S.facets @ B])
    FAX = S.facets @ A @ S.vertices.T  # (p, N)
    witnesses = []
    for i in range(S.vertex_count):
        l = np.concatenate([np.ones(q), 1.0 - FAX[:, i]])
        w = _check_vertex(G, l, q, det_tol, tol, vertex=i, sample=sample_index)
        if w is None:
            return SingleSampleResult(
                feasible=False, witnesses=tuple(witnesses), failed_vertex=i
            )
        witnesses.append(w)
    return SingleSampleResult(feasible=True, witnesses=tuple(witnesses))


def multisample_necessary(
    family,
    S: Polytope,
    U: Polytope,
    scenarios,
    det_tol: float = DET_TOL,
    tol: float = 1e-8,
    *,
    cap: int = ENUMERATION_CAP,
) -> MultisampleResult:
    """Necessary condition for the joint scenario program over all samples.

    Fails (with the first failing (vertex, sample) pair) as soon as one
    sample's block is infeasible, which certifies the joint program empty.
    Passing does NOT certify joint feasibility: a shared affine policy may
    still not exist even when every sample is individually controllable.
    """
    for j in range(scenarios.K):
        result = single_sample_iff(
            family,
            S,
            U,
            scenarios.samples[j],
            det_tol=det_tol,
            tol=tol,
            sample_index=j,
            cap=cap,
        )
        if not result.feasible:
            return MultisampleResult(
                passed=False, first_failure=(result.failed_vertex, j)
            )
    return MultisampleResult(passed=True)
