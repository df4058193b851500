"""Grassmann graphs: counting, two distance computations, duality.

The vertex count, checked against the Gaussian binomial; graph distance
computed as k - dim(A ∩ B) and independently by breadth-first search;
the annihilator map as a graph isomorphism; and the empirically computed
intersection numbers witnessing distance regularity.
"""

import numpy as np

from qgeom import (
    Field,
    GrassmannGraph,
    enum_grassmannian,
    gaussian_binomial,
    grassmann_distance,
    intersection_numbers,
    star,
)
from qgeom.grassmann import count_by_enumeration, duality_permutation
from qgeom.subspace import Subspace

gf2 = Field(2)
gf3 = Field(3)

print("=== counting k-dim subspaces two ways ===")
for f, n, k in [(gf2, 4, 2), (gf2, 5, 3), (gf2, 6, 3), (gf3, 4, 2)]:
    formula = gaussian_binomial(n, k, f.q)
    direct = count_by_enumeration(f, n, k)
    print(f"q={f.q} n={n} k={k}: product formula {formula}, "
          f"direct enumeration {direct}")
    assert formula == direct

print("\n=== distance: closed form vs breadth-first search ===")
g = GrassmannGraph(gf2, 4, 2)
D = g.distance_matrix
deviations = sum(
    1
    for i in range(g.n_vertices)
    for j in range(g.n_vertices)
    if D[i, j] != grassmann_distance(g.vertices[i], g.vertices[j])
)
print(f"Gamma_2(GF(2)^4): {g.n_vertices} vertices, "
      f"{deviations} deviations over all pairs, diameter {g.diameter()}")
assert deviations == 0

print("\n=== stars ===")
U = Subspace.span(gf2, [[0, 0, 0, 1]])
members = star(U, 2)
print(f"2-dim subspaces over a fixed point: {len(members)} "
      f"(= Gaussian binomial {gaussian_binomial(3, 1, 2)})")
assert members == [S for S in enum_grassmannian(gf2, 4, 2) if S.contains(U)]

print("\n=== duality is a graph automorphism when n = 2k ===")
perm = duality_permutation(g, g)
assert (perm[perm] == np.arange(g.n_vertices)).all()
print(f"annihilator map: an involution moving "
      f"{int((perm != np.arange(35)).sum())} of 35 vertices")

print("\n=== empirical intersection numbers ===")
print(f"Gamma_2(GF(2)^4): {intersection_numbers(g)}")

print("\nall checks passed")
