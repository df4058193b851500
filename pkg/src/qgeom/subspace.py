"""Exact linear algebra over GF(q): matrices, canonical subspaces, quotients.

Matrices are plain numpy uint8 arrays of field-element encodings; every
operation routes through the field's lookup tables, so all arithmetic is
exact.  A :class:`Subspace` stores the unique reduced row echelon basis
of its row space, which makes equality, hashing and ordering byte
comparisons: equal subspaces have identical encodings, and sorting by
the flattened entry sequence is the canonical order used for vertex
lists everywhere in this package.
"""

from __future__ import annotations

import numpy as np

from .errors import AmbientMismatch, DimensionMismatch
from .gf import Field


# -- raw matrix machinery -----------------------------------------------------

def as_matrix(field: Field, data) -> np.ndarray:
    """Coerce to a 2-d uint8 matrix and range-check entries."""
    A = np.asarray(data, dtype=np.uint8)
    if A.ndim == 1:
        A = A.reshape(1, -1)
    if A.ndim != 2:
        raise DimensionMismatch(f"expected a matrix, got ndim={A.ndim}")
    if A.size and int(A.max()) >= field.q:
        raise ValueError(f"entry {int(A.max())} out of range for {field}")
    return A


def rref(field: Field, mat) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form of the row space.

    Returns ``(R, pivots)`` where R has its zero rows dropped, pivot
    entries are 1 and pivot columns are elsewhere 0.  Idempotent; the
    output is the unique canonical representative of the row space.
    """
    A = as_matrix(field, mat).copy()
    rows, cols = A.shape
    mulT, addT = field.mul_table, field.add_table
    negT, invT = field.neg_table, field.inv_table
    r = 0
    pivots: list[int] = []
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(A[r:, c])
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            A[[r, i]] = A[[i, r]]
        pv = int(A[r, c])
        if pv != 1:
            A[r] = mulT[invT[pv], A[r]]
        colvals = A[:, c].copy()
        colvals[r] = 0
        sel = np.flatnonzero(colvals)
        if sel.size:
            factors = negT[colvals[sel]]
            A[sel] = addT[A[sel], mulT[factors[:, None], A[r][None, :]]]
        pivots.append(c)
        r += 1
    return A[:r], pivots


def _rank_gf2_bits(A: np.ndarray) -> int:
    """GF(2) rank via bit-packed elimination; rows fit in Python ints."""
    cols = A.shape[1]
    packed = (A.astype(np.int64) @ (np.int64(1) << np.arange(cols, dtype=np.int64)))
    pivots: dict[int, int] = {}
    r = 0
    for x in packed.tolist():
        while x:
            lead = x.bit_length()
            if lead in pivots:
                x ^= pivots[lead]
            else:
                pivots[lead] = x
                r += 1
                break
    return r


def rank(field: Field, mat) -> int:
    """Row rank; forward elimination only, cheaper than full rref."""
    if field.p == 2 and field.e == 1:
        A = np.asarray(mat, dtype=np.uint8)
        if A.ndim == 2 and A.shape[1] <= 62:
            return _rank_gf2_bits(A)
    A = as_matrix(field, mat).copy()
    rows, cols = A.shape
    mulT, addT = field.mul_table, field.add_table
    negT, invT = field.neg_table, field.inv_table
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(A[r:, c])
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            A[[r, i]] = A[[i, r]]
        pv = int(A[r, c])
        if pv != 1:
            A[r] = mulT[invT[pv], A[r]]
        below = A[r + 1:, c]
        sel = np.flatnonzero(below)
        if sel.size:
            rows_idx = r + 1 + sel
            factors = negT[below[sel]]
            A[rows_idx] = addT[A[rows_idx], mulT[factors[:, None], A[r][None, :]]]
        r += 1
    return r


def nullspace(field: Field, mat) -> np.ndarray:
    """Canonical (RREF) basis of ``{x : mat @ x = 0}``, as rows."""
    A, pivots = rref(field, mat)
    rows, cols = A.shape
    free = [c for c in range(cols) if c not in pivots]
    if not free:
        return np.zeros((0, cols), dtype=np.uint8)
    out = np.zeros((len(free), cols), dtype=np.uint8)
    negT = field.neg_table
    for t, f in enumerate(free):
        out[t, f] = 1
        for i, pcol in enumerate(pivots):
            out[t, pcol] = negT[A[i, f]]
    R, _ = rref(field, out)
    return R


def mat_mul(field: Field, A, B) -> np.ndarray:
    """Matrix product over the field."""
    A = as_matrix(field, A)
    B = as_matrix(field, B)
    if A.shape[1] != B.shape[0]:
        raise DimensionMismatch(f"cannot multiply {A.shape} by {B.shape}")
    if field.p == 2 and field.e == 1:
        # uint8 wraparound is mod 256, which preserves parity
        return (A @ B) & 1
    if field.e == 1:
        return ((A.astype(np.int32) @ B.astype(np.int32)) % field.p).astype(np.uint8)
    out = np.zeros((A.shape[0], B.shape[1]), dtype=np.uint8)
    mulT, addT = field.mul_table, field.add_table
    for t in range(A.shape[1]):
        out = addT[out, mulT[A[:, t][:, None], B[t][None, :]]]
    return out


def mat_frobenius(field: Field, A, t: int) -> np.ndarray:
    """Entrywise p^t power."""
    return field.frob_table[t % field.e][as_matrix(field, A)]


def invert_matrix(field: Field, A) -> np.ndarray:
    """Inverse of a square matrix; raises DimensionMismatch if singular."""
    A = as_matrix(field, A)
    n = A.shape[0]
    if A.shape[1] != n:
        raise DimensionMismatch(f"not square: {A.shape}")
    aug = np.zeros((n, 2 * n), dtype=np.uint8)
    aug[:, :n] = A
    aug[np.arange(n), n + np.arange(n)] = 1
    R, pivots = rref(field, aug)
    if pivots[:n] != list(range(n)) or len(pivots) < n:
        raise DimensionMismatch("matrix is singular")
    return R[:, n:].copy()


def _reduce_against(field: Field, basis: np.ndarray, pivots: list[int], v) -> np.ndarray:
    """Residual of v after elimination by an RREF basis."""
    w = np.array(v, dtype=np.uint8).copy()
    mulT, addT, negT = field.mul_table, field.add_table, field.neg_table
    for i, c in enumerate(pivots):
        if w[c]:
            w = addT[w, mulT[negT[w[c]], basis[i]]]
    return w


def reduce_rows_against(field: Field, basis: np.ndarray, pivots: list[int],
                        rows: np.ndarray) -> np.ndarray:
    """Residuals of many rows after elimination by an RREF basis."""
    W = np.asarray(rows, dtype=np.uint8).copy()
    if field.p == 2 and field.e == 1:
        for i, c in enumerate(pivots):
            W ^= W[:, c][:, None] * basis[i][None, :]
        return W
    mulT, addT, negT = field.mul_table, field.add_table, field.neg_table
    for i, c in enumerate(pivots):
        W = addT[W, mulT[negT[W[:, c]][:, None], basis[i][None, :]]]
    return W


# -- canonical subspaces ------------------------------------------------------

class Subspace:
    """A subspace of GF(q)^n held as its unique RREF basis.

    Immutable value object: the basis array is read-only, equality and
    hashing go through the flattened byte encoding, and ``<`` orders
    subspaces by (ambient dimension, dimension, entry sequence), which
    is the canonical vertex order.
    """

    __slots__ = ("field", "ambient_dim", "basis", "_bytes", "_hash",
                 "_pivots", "_ann")

    def __init__(self, field: Field, ambient_dim: int, basis: np.ndarray):
        # callers must pass a verified RREF basis; use span() otherwise
        self.field = field
        self.ambient_dim = int(ambient_dim)
        b = np.asarray(basis, dtype=np.uint8)
        if b.ndim != 2 or b.shape[1] != ambient_dim:
            raise DimensionMismatch(f"basis shape {b.shape} vs ambient {ambient_dim}")
        b = b.copy()
        b.setflags(write=False)
        self.basis = b
        self._bytes = b.tobytes()
        self._hash = hash((self.ambient_dim, b.shape[0], self._bytes))
        self._pivots = None
        self._ann = None

    # -- constructors ------------------------------------------------------

    @classmethod
    def span(cls, field: Field, vectors, ambient_dim: int | None = None) -> "Subspace":
        """Canonical subspace spanned by the given row vectors."""
        A = np.asarray(vectors, dtype=np.uint8)
        if A.ndim == 1:
            A = A.reshape(1, -1)
        if A.size == 0:
            if ambient_dim is None:
                raise DimensionMismatch("empty span needs an explicit ambient_dim")
            return cls.zero(field, ambient_dim)
        n = A.shape[1]
        if ambient_dim is not None and ambient_dim != n:
            raise AmbientMismatch(f"vectors of length {n} in ambient {ambient_dim}")
        R, _ = rref(field, A)
        return cls(field, n, R)

    @classmethod
    def zero(cls, field: Field, ambient_dim: int) -> "Subspace":
        return cls(field, ambient_dim, np.zeros((0, ambient_dim), dtype=np.uint8))

    @classmethod
    def full(cls, field: Field, ambient_dim: int) -> "Subspace":
        return cls(field, ambient_dim, np.eye(ambient_dim, dtype=np.uint8))

    # -- basic queries -------------------------------------------------------

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    @property
    def pivots(self) -> list[int]:
        if self._pivots is None:
            self._pivots = [int(np.flatnonzero(row)[0]) for row in self.basis]
        return self._pivots

    def contains_vector(self, v) -> bool:
        w = _reduce_against(self.field, self.basis, self.pivots, v)
        return not w.any()

    def contains(self, other: "Subspace") -> bool:
        """True iff other is a subspace of self."""
        self._check_compatible(other)
        if other.dim > self.dim:
            return False
        piv = self.pivots
        for row in other.basis:
            if _reduce_against(self.field, self.basis, piv, row).any():
                return False
        return True

    def all_vectors(self) -> np.ndarray:
        """Every member vector, (q^dim, n); small dimensions only."""
        q, d = self.field.q, self.dim
        if d == 0:
            return np.zeros((1, self.ambient_dim), dtype=np.uint8)
        combos = np.array(
            np.unravel_index(np.arange(q**d), (q,) * d), dtype=np.uint8
        ).T
        return mat_mul(self.field, combos, self.basis)

    # -- lattice operations ----------------------------------------------------

    def _check_compatible(self, other: "Subspace") -> None:
        self.field.check_same(other.field)
        if self.ambient_dim != other.ambient_dim:
            raise AmbientMismatch(f"{self.ambient_dim} vs {other.ambient_dim}")

    def __add__(self, other: "Subspace") -> "Subspace":
        """Sum of subspaces (span of the union of bases)."""
        self._check_compatible(other)
        stacked = np.vstack([self.basis, other.basis])
        return Subspace.span(self.field, stacked, self.ambient_dim)

    def intersect(self, other: "Subspace") -> "Subspace":
        """Intersection, via annihilator duality: (A^0 + B^0)^0."""
        self._check_compatible(other)
        joint = np.vstack([self.annihilator().basis, other.annihilator().basis])
        return Subspace(self.field, self.ambient_dim,
                        nullspace(self.field, joint))

    __and__ = intersect

    def intersection_dim(self, other: "Subspace") -> int:
        """dim(A ∩ B) = dim A + dim B - dim(A + B); no basis built."""
        self._check_compatible(other)
        stacked = np.vstack([self.basis, other.basis])
        return self.dim + other.dim - rank(self.field, stacked)

    def annihilator(self) -> "Subspace":
        """All dual vectors vanishing on self, under the standard dot pairing.

        Cached: vertex objects are shared across graphs and embeddings,
        so repeat annihilators are frequent and free.
        """
        if self._ann is None:
            self._ann = Subspace(self.field, self.ambient_dim,
                                 nullspace(self.field, self.basis))
        return self._ann

    # -- value semantics ---------------------------------------------------------

    @property
    def key(self) -> tuple:
        return (self.ambient_dim, self.basis.shape[0], self._bytes)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Subspace)
            and self.field == other.field
            and self.key == other.key
        )

    def __hash__(self) -> int:
        return self._hash

    def __lt__(self, other: "Subspace") -> bool:
        return self.key < other.key

    def __repr__(self) -> str:
        rows = self.basis.tolist()
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim}, basis={rows})"

    def to_rows(self) -> list[list[int]]:
        """JSON-friendly list of basis rows."""
        return [[int(x) for x in row] for row in self.basis]


def multi_intersection(spaces: list[Subspace]) -> Subspace:
    """Intersection of many subspaces at once.

    Stacks all annihilator bases and takes a single kernel, which is
    much cheaper than folding pairwise intersections.
    """
    if not spaces:
        raise DimensionMismatch("need at least one subspace")
    field = spaces[0].field
    n = spaces[0].ambient_dim
    anns = [s.annihilator().basis for s in spaces]
    return Subspace(field, n, nullspace(field, np.vstack(anns)))


def projective_point_reps(field: Field, n: int) -> np.ndarray:
    """Canonical representatives of all 1-dim subspaces of GF(q)^n.

    Each row is the RREF representative (first nonzero entry 1), and
    rows come out in ascending lexicographic order of the entry tuple,
    so e_n is first and (1, *, ..., *) vectors come last.
    """
    q = field.q
    blocks = []
    for lead in range(n - 1, -1, -1):
        tail = n - 1 - lead
        count = q**tail
        block = np.zeros((count, n), dtype=np.uint8)
        block[:, lead] = 1
        if tail:
            combos = np.array(
                np.unravel_index(np.arange(count), (q,) * tail), dtype=np.uint8
            ).T
            block[:, lead + 1:] = combos
        blocks.append(block)
    return np.vstack(blocks)


# -- quotient spaces -----------------------------------------------------------

class QuotientSpace:
    """The quotient W = V / U in concrete coordinates.

    The coordinate model keeps the non-pivot columns of U's RREF basis
    as a transversal, so W is literally GF(q)^(n - dim U) and all the
    matrix machinery above applies unchanged.  ``project`` sends a
    subspace S of V to (S + U)/U; ``lift_vector`` is the section with
    zeros on the pivot columns, and project(lift(w)) = w.
    """

    __slots__ = ("field", "ambient_dim", "mod_out", "dim", "coordinate_map",
                 "_transversal")

    def __init__(self, ambient_dim: int, mod_out: Subspace):
        if mod_out.ambient_dim != ambient_dim:
            raise AmbientMismatch(
                f"U lives in dimension {mod_out.ambient_dim}, not {ambient_dim}")
        field = mod_out.field
        self.field = field
        self.ambient_dim = ambient_dim
        self.mod_out = mod_out
        piv = mod_out.pivots
        transversal = [c for c in range(ambient_dim) if c not in piv]
        self.dim = len(transversal)
        self._transversal = transversal
        cmap = np.zeros((self.dim, ambient_dim), dtype=np.uint8)
        negT = field.neg_table
        for j, c in enumerate(transversal):
            cmap[j, c] = 1
            for i, pcol in enumerate(piv):
                cmap[j, pcol] = negT[mod_out.basis[i, c]]
        cmap.setflags(write=False)
        self.coordinate_map = cmap

    def project_vector(self, v) -> np.ndarray:
        v = np.asarray(v, dtype=np.uint8).reshape(-1, 1)
        return mat_mul(self.field, self.coordinate_map, v).reshape(-1)

    def project(self, S: Subspace) -> Subspace:
        """Image (S + U)/U as a canonical subspace of GF(q)^dim."""
        if S.ambient_dim != self.ambient_dim:
            raise AmbientMismatch(f"{S.ambient_dim} vs {self.ambient_dim}")
        if S.dim == 0:
            return Subspace.zero(self.field, self.dim)
        img = mat_mul(self.field, S.basis, self.coordinate_map.T)
        return Subspace.span(self.field, img, self.dim)

    def lift_vector(self, w) -> np.ndarray:
        w = np.asarray(w, dtype=np.uint8).reshape(-1)
        if w.shape[0] != self.dim:
            raise DimensionMismatch(f"expected length {self.dim}, got {w.shape[0]}")
        v = np.zeros(self.ambient_dim, dtype=np.uint8)
        v[self._transversal] = w
        return v

    def lift_matrix(self) -> np.ndarray:
        """Rows are the lifts of the W coordinate basis vectors."""
        out = np.zeros((self.dim, self.ambient_dim), dtype=np.uint8)
        for j, c in enumerate(self._transversal):
            out[j, c] = 1
        return out

    def __repr__(self) -> str:
        return (f"QuotientSpace(ambient={self.ambient_dim}, "
                f"mod_out_dim={self.mod_out.dim}, dim={self.dim})")


def quotient(ambient_dim: int, U: Subspace) -> QuotientSpace:
    """Quotient space V/U in transversal coordinates."""
    return QuotientSpace(ambient_dim, U)
