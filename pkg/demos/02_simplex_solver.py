"""The built-in dense LP solver.

Two-phase simplex with deterministic pivoting: identical inputs produce
bit-identical solutions, which is what makes policy synthesis a
single-valued map and the support-subsample machinery meaningful.
"""

import numpy as np

from invarcert import LinearProgram, solve

# minimize -z1 - z2 over the standard simplex
lp = LinearProgram(
    c=[-1.0, -1.0],
    A_in=[[1.0, 1.0]],
    b_in=[1.0],
    bounds=[(0.0, None), (0.0, None)],
)
out = solve(lp)
print("status:", out.status.value, " z =", out.z, " objective =", out.objective)

# equalities and free variables are fine
lp = LinearProgram(
    c=[1.0, 0.0],
    A_in=[[-1.0, 0.0]],
    b_in=[2.0],
    A_eq=[[1.0, 1.0]],
    b_eq=[1.0],
)
print("with equality:", solve(lp).z)

# infeasible and unbounded problems are reported as statuses, not errors
print(
    "empty set:",
    solve(LinearProgram(c=[0.0], A_in=[[1.0]], b_in=[-1.0], bounds=[(0.0, None)])).status.value,
)
print(
    "unbounded:",
    solve(LinearProgram(c=[-1.0], A_in=[[-1.0]], b_in=[0.0])).status.value,
)

# determinism: rerunning gives the same bits
rng = np.random.default_rng(0)
lp = LinearProgram(
    c=rng.normal(size=4),
    A_in=rng.normal(size=(10, 4)),
    b_in=rng.normal(size=10) + 2.0,
    bounds=[(-3.0, 3.0)] * 4,
)
z1, z2 = solve(lp).z, solve(lp).z
print("bit-identical reruns:", z1.tobytes() == z2.tobytes())
