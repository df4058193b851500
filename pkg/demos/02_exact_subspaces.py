"""Canonical subspaces of GF(q)^n: the RREF representation at work.

Every subspace is held as its unique reduced-row-echelon basis, so
equality is byte equality and the lattice operations (sum, intersection,
annihilator, quotient) are exact.
"""

import numpy as np

from qgeom import Field, QuotientSpace, Subspace
from qgeom.subspace import mat_mul, rank

gf3 = Field(3)

print("=== one subspace, many generating sets, one encoding ===")
S = Subspace.span(gf3, [[1, 0, 2, 1], [0, 1, 1, 1]])
rng = np.random.default_rng(0)
for _ in range(4):
    while True:
        C = rng.integers(0, 3, size=(2, 2)).astype(np.uint8)
        if rank(gf3, C) == 2:
            break
    T = Subspace.span(gf3, mat_mul(gf3, C, S.basis))
    assert T == S and T.basis.tobytes() == S.basis.tobytes()
print(f"4 random regenerations of {S.to_rows()} -> identical bytes")

print("\n=== lattice operations ===")
gf2 = Field(2)
A = Subspace.span(gf2, [[1, 0, 0, 0], [0, 1, 0, 0]])
B = Subspace.span(gf2, [[0, 1, 0, 0], [0, 0, 1, 0]])
print(f"A ∩ B = {(A & B).to_rows()}")
print(f"A + B has dimension {(A + B).dim}")
assert (A & B).dim + (A + B).dim == A.dim + B.dim  # modular law

print("\n=== annihilators: an inclusion-reversing bijection ===")
P = Subspace.span(gf2, [[1, 0, 0]])
print(f"ann({P.to_rows()}) = {P.annihilator().to_rows()}")
assert P.annihilator().annihilator() == P

print("\n=== quotients in concrete coordinates ===")
U = Subspace.span(gf2, [[0, 0, 0, 1]])
W = QuotientSpace(4, U)
S = Subspace.span(gf2, [[1, 0, 0, 0], [0, 0, 0, 1]])
print(f"dim of (S + U)/U for S = {S.to_rows()}: {W.project(S).dim}")
assert W.project(S).dim == (S + U).dim - U.dim
assert W.project(U).dim == 0

print("\nall checks passed")
