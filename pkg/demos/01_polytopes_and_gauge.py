"""Polytopes in dual representation: membership, gauge, decomposition.

Every set in this toolbox carries both a facet matrix (F x <= 1) and its
vertex list.  The gauge tells you how far out a point sits (1.0 means on
the boundary); the vertex decomposition writes a point as a nonnegative
combination of vertices whose total weight equals that gauge.
"""

import numpy as np

import invarcert as ic

# an asymmetric box: shorthand constructor emits both representations
P = ic.box(lower=[-0.5, -2.0], upper=[1.0, 0.25])
print("facets:\n", P.facets)
print("vertices:\n", P.vertices)

for x in [(0.0, 0.0), (0.5, -1.0), (1.0, 0.25), (2.0, 0.0)]:
    inside = ic.contains(P, x)
    gauge = ic.minkowski_gauge(P, x)
    print(f"x = {x}: contains = {inside}, gauge = {gauge:.4f}")

# decompose a boundary point: weights sum to the gauge
x = np.array([1.0, -0.875])
gamma = ic.vertex_decompose(P, x)
print("\ndecomposition of", x, "->", np.round(gamma, 4))
print("sum(gamma) =", gamma.sum(), " gauge =", ic.minkowski_gauge(P, x))
print("recombined:", gamma @ P.vertices)

# validation catches inconsistent representations
try:
    ic.validate_polytope(P.facets, np.vstack([P.vertices, [3.0, 0.0]]))
except ic.InvarcertError as exc:
    print("\nvalidation rejected a stray vertex:", exc)
