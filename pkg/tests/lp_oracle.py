"""Exhaustive basic-solution oracle for small LPs.

Independent of the simplex path: every n-subset of constraint rows is
solved as an equality system, feasible vertices are collected, and the
best objective wins.  Only valid when the feasible region is bounded
(tests add box bounds to guarantee it).
"""

import itertools

import numpy as np


def enumerate_optimum(c, A_in, b_in, lower, upper, tol=1e-9):
    """Return ("infeasible", None) or ("optimal", best_objective)."""
    c = np.asarray(c, dtype=float)
    n = c.size
    rows = [np.asarray(A_in, dtype=float).reshape(-1, n)]
    rhs = [np.asarray(b_in, dtype=float).ravel()]
    eye = np.eye(n)
    rows.extend([eye, -eye])
    rhs.extend([np.asarray(upper, dtype=float), -np.asarray(lower, dtype=float)])
    rows = np.vstack(rows)
    rhs = np.concatenate(rhs)

    best = None
    for subset in itertools.combinations(range(rows.shape[0]), n):
        M = rows[list(subset)]
        if abs(np.linalg.det(M)) < 1e-12:
            continue
        x = np.linalg.solve(M, rhs[list(subset)])
        if np.all(rows @ x <= rhs + tol):
            value = float(c @ x)
            if best is None or value < best:
                best = value
    if best is None:
        return "infeasible", None
    return "optimal", best
