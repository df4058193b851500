"""Reflexive forms, singular subspaces, polar spaces, dual polar graphs.

A form lives on a coordinate prefix of the ambient space: ``form_dim``
names how many leading coordinates it touches, and every vector fed to
it must vanish beyond that prefix.  Three kinds are supported:

* ``alternating``  B(x, y) = x G y^T with zero-diagonal (anti)symmetric G,
* ``hermitian``    B(x, y) = x G conj(y)^T with G equal to its conjugate
  transpose (needs an even-degree field),
* ``quadratic``    Q(x) = sum over i <= j of quad[i][j] x_i x_j, with the
  polar form B(x, y) = Q(x+y) - Q(x) - Q(y) always derived from Q, which
  sidesteps the characteristic-2 symmetric/alternating ambiguity.

A polar space collects the singular points, the totally singular lines,
the rank m, and all maximal totally singular subspaces, found by
depth-first extension with canonical deduplication.  Degenerate forms
are rejected, never repaired.
"""

from __future__ import annotations

import numpy as np

from .errors import (
    AmbientMismatch,
    DegenerateForm,
    Disconnected,
    KindMismatch,
    NonUniformMaximals,
    NotSingular,
    OutsideSupport,
    QGeomError,
    RankZero,
    TooLarge,
)
from .gf import Field
from .grassmann import FiniteGraph
from .subspace import (
    Subspace,
    as_matrix,
    mat_mul,
    nullspace,
    projective_point_reps,
    rank,
)

FORM_KINDS = ("alternating", "quadratic", "hermitian")


class Form:
    """A reflexive or quadratic form on the first ``form_dim`` coordinates.

    Parameters
    ----------
    field : Field
    kind : str
        One of ``alternating``, ``quadratic``, ``hermitian``.
    form_dim : int
        Size of the coordinate prefix the form lives on.
    gram : matrix, for alternating and hermitian kinds
    quad : upper-triangular matrix of coefficients, for the quadratic kind
    """

    def __init__(self, field: Field, kind: str, form_dim: int,
                 gram=None, quad=None):
        if kind not in FORM_KINDS:
            raise KindMismatch(f"unknown form kind {kind!r}")
        self.field = field
        self.kind = kind
        self.form_dim = int(form_dim)
        self.gram = None
        self.quad = None
        negT = field.neg_table

        if kind == "quadratic":
            if quad is None:
                raise KindMismatch("quadratic form needs quad coefficients")
            Qm = as_matrix(field, quad)
            if Qm.shape != (form_dim, form_dim):
                raise AmbientMismatch(f"quad shape {Qm.shape} vs form_dim {form_dim}")
            if any(Qm[i, j] for i in range(form_dim) for j in range(i)):
                raise KindMismatch("quad coefficients must be upper-triangular")
            Qm = Qm.copy()
            Qm.setflags(write=False)
            self.quad = Qm
            # polar form gram: B(e_i, e_j) entries, derived from Q
            P = field.add_table[Qm, Qm.T]
            P.setflags(write=False)
            self._bilinear = P
        else:
            if gram is None:
                raise KindMismatch(f"{kind} form needs a gram matrix")
            G = as_matrix(field, gram)
            if G.shape != (form_dim, form_dim):
                raise AmbientMismatch(f"gram shape {G.shape} vs form_dim {form_dim}")
            if kind == "alternating":
                if any(G[i, i] for i in range(form_dim)):
                    raise KindMismatch("alternating gram needs a zero diagonal")
                if not np.array_equal(G.T, negT[G]):
                    raise KindMismatch("alternating gram must be antisymmetric")
            else:
                conjG = field.frob_table[field.e // 2][G] if field.e % 2 == 0 else None
                if conjG is None:
                    raise KindMismatch(
                        "hermitian forms need an even-degree field extension")
                if not np.array_equal(G, conjG.T):
                    raise KindMismatch("gram must equal its conjugate transpose")
            G = G.copy()
            G.setflags(write=False)
            self.gram = G
            self._bilinear = G

    # -- evaluation ---------------------------------------------------------

    def _prefix(self, x) -> np.ndarray:
        v = np.asarray(x, dtype=np.uint8).reshape(-1)
        if v.shape[0] < self.form_dim:
            raise AmbientMismatch(
                f"vector of length {v.shape[0]} below form_dim {self.form_dim}")
        if v[self.form_dim:].any():
            raise OutsideSupport(
                f"nonzero coordinate beyond the first {self.form_dim}")
        return v[: self.form_dim]

    def evaluate(self, x, y) -> int:
        """Bilinear (or sesquilinear, or polar) value B(x, y)."""
        a = self._prefix(x)
        b = self._prefix(y)
        if self.kind == "hermitian":
            b = self.field.frob_table[self.field.e // 2][b]
        out = mat_mul(self.field, a[None, :],
                      mat_mul(self.field, self._bilinear, b[:, None]))
        return int(out[0, 0])

    def evaluate_quadratic(self, x) -> int:
        """Q(x); quadratic kind only."""
        if self.kind != "quadratic":
            raise KindMismatch(f"{self.kind} form has no quadratic value")
        a = self._prefix(x)
        out = mat_mul(self.field, a[None, :],
                      mat_mul(self.field, self.quad, a[:, None]))
        return int(out[0, 0])

    def singular_vector(self, x) -> bool:
        """Is the vector singular (isotropic) for this form?"""
        if self.kind == "alternating":
            self._prefix(x)
            return True
        if self.kind == "quadratic":
            return self.evaluate_quadratic(x) == 0
        return self.evaluate(x, x) == 0

    # -- orthogonality machinery -------------------------------------------

    def orthogonal_profile(self, vectors: np.ndarray) -> np.ndarray:
        """Row i = the functional B(., vectors[i]) on the prefix coordinates.

        A vector x is orthogonal to vectors[i] iff the prefix of x dots
        to zero against row i.  Vectorized helper for the construction
        loops below.
        """
        V = np.asarray(vectors, dtype=np.uint8)[:, : self.form_dim]
        if self.kind == "hermitian":
            V = self.field.frob_table[self.field.e // 2][V]
        return mat_mul(self.field, V, self._bilinear.T)

    def as_json_obj(self) -> dict:
        obj = {"kind": self.kind, "form_dim": self.form_dim}
        if self.gram is not None:
            obj["gram"] = [[int(x) for x in row] for row in self.gram]
        if self.quad is not None:
            obj["quad"] = [[int(x) for x in row] for row in self.quad]
        return obj


def build_form(field: Field, spec: dict) -> Form:
    """Form from a config mapping, e.g. {"kind": "alternating", "form_dim": 4, "gram": [[...]]}."""
    return Form(
        field,
        str(spec["kind"]),
        int(spec["form_dim"]),
        gram=spec.get("gram"),
        quad=spec.get("quad"),
    )


def radical(form: Form, ambient_dim: int | None = None) -> Subspace:
    """Vectors orthogonal to the whole support (and singular, for quadratic).

    Returned in the given ambient dimension (default: the form's own
    support).  A zero radical is what qualifies a form for polar-space
    construction.
    """
    field = form.field
    np_dim = form.form_dim
    n = ambient_dim if ambient_dim is not None else np_dim
    ker = nullspace(field, form._bilinear.T)
    if form.kind == "quadratic" and ker.shape[0]:
        # the singular part of the bilinear radical is still a subspace
        # in every characteristic; find it by exhaustive scan
        d = ker.shape[0]
        if field.q**d > 4096:
            raise TooLarge(f"radical scan over {field.q ** d} vectors")
        K = Subspace(field, np_dim, ker)
        vecs = K.all_vectors()
        good = [v for v in vecs if form.evaluate_quadratic(v) == 0]
        span = Subspace.span(field, np.array(good, dtype=np.uint8), np_dim)
        assert len(good) == field.q**span.dim, "quadratic radical is not a subspace"
        ker = span.basis
    if n > np_dim:
        padded = np.zeros((ker.shape[0], n), dtype=np.uint8)
        padded[:, :np_dim] = ker
        ker = padded
    return Subspace(field, n, ker)


def is_totally_singular(form: Form, S: Subspace) -> bool:
    """Does the form vanish identically on S?

    Basis criterion: singular basis vectors plus pairwise orthogonality;
    this is sufficient for the whole span by the standard scaling and
    addition identities (cross-checked against full vector enumeration
    in the test suite).
    """
    if S.dim == 0:
        return True
    B = S.basis
    if B.shape[1] < form.form_dim or (
        B.shape[1] > form.form_dim and B[:, form.form_dim:].any()
    ):
        if B.shape[1] < form.form_dim:
            raise OutsideSupport(f"ambient {B.shape[1]} below form_dim")
        raise OutsideSupport("basis not supported on the form's prefix")
    for i in range(S.dim):
        if not form.singular_vector(B[i]):
            return False
    prof = form.orthogonal_profile(B)
    vals = mat_mul(form.field, B[:, : form.form_dim], prof.T)
    for i in range(S.dim):
        for j in range(i + 1, S.dim):
            if vals[i, j]:
                return False
        if form.kind != "quadratic" and vals[i, i]:
            return False
    return True


class PolarSpace:
    """Singular points, lines, rank, and maximal totally singular subspaces.

    All member subspaces live in the full ambient dimension (padded with
    zero coordinates beyond the form's support), so they drop straight
    into Grassmann-graph machinery over the same ambient space.
    """

    def __init__(self, field: Field, ambient_dim: int, form: Form,
                 points, lines, rank_m: int, maximals):
        self.field = field
        self.ambient_dim = ambient_dim
        self.form = form
        self.points = tuple(points)
        self.lines = tuple(lines)
        self.rank = rank_m
        self.maximals = tuple(maximals)
        vp = np.zeros((form.form_dim, ambient_dim), dtype=np.uint8)
        vp[np.arange(form.form_dim), np.arange(form.form_dim)] = 1
        self.v_prime = Subspace(field, ambient_dim, vp)
        self._point_index = {p: i for i, p in enumerate(self.points)}
        self._line_index = {l: i for i, l in enumerate(self.lines)}
        self._maximal_index = {m: i for i, m in enumerate(self.maximals)}
        self._cache: dict = {}

    # -- incidence ------------------------------------------------------------

    def point_index(self, P: Subspace) -> int:
        return self._point_index[P]

    def maximal_index(self, M: Subspace) -> int:
        return self._maximal_index[M]

    def maximals_through_point(self, i: int) -> tuple[int, ...]:
        key = ("maxthru", i)
        if key not in self._cache:
            P = self.points[i]
            self._cache[key] = tuple(
                t for t, M in enumerate(self.maximals) if M.contains(P)
            )
        return self._cache[key]

    def line_point_indices(self, l: int) -> tuple[int, ...]:
        key = ("linepts", l)
        if key not in self._cache:
            L = self.lines[l]
            reps = projective_point_reps(self.field, 2)
            pts = []
            for r in mat_mul(self.field, reps, L.basis):
                pts.append(self._point_index[Subspace.span(self.field, r)])
            self._cache[key] = tuple(sorted(pts))
        return self._cache[key]

    def maximals_through_line(self, l: int) -> tuple[int, ...]:
        key = ("maxthruline", l)
        if key not in self._cache:
            L = self.lines[l]
            self._cache[key] = tuple(
                t for t, M in enumerate(self.maximals) if M.contains(L)
            )
        return self._cache[key]

    def source_distance_matrix(self) -> np.ndarray:
        """Pairwise m - dim(M_i ∩ M_j) over the maximals."""
        if "dmat" not in self._cache:
            t = len(self.maximals)
            D = np.zeros((t, t), dtype=np.int16)
            for i in range(t):
                for j in range(i + 1, t):
                    d = self.rank - self.maximals[i].intersection_dim(self.maximals[j])
                    D[i, j] = D[j, i] = d
            D.setflags(write=False)
            self._cache["dmat"] = D
        return self._cache["dmat"]

    def summary(self) -> dict:
        return {
            "ambient_dim": self.ambient_dim,
            "form": self.form.as_json_obj(),
            "n_points": len(self.points),
            "n_lines": len(self.lines),
            "rank": self.rank,
            "n_maximals": len(self.maximals),
        }

    def __repr__(self) -> str:
        return (f"PolarSpace(rank={self.rank}, points={len(self.points)}, "
                f"lines={len(self.lines)}, maximals={len(self.maximals)})")


def build_polar_space(field: Field, ambient_dim: int, form: Form,
                      cap: int = 10**6) -> PolarSpace:
    """Construct the polar space of a nondegenerate form.

    Enumerates singular points, grows totally singular subspaces level
    by level with canonical deduplication, and reads the rank off the
    top level.  Raises DegenerateForm for a nonzero radical, RankZero
    when no point is singular, and NonUniformMaximals if some totally
    singular subspace cannot be extended to the full rank.
    """
    if form.form_dim > ambient_dim:
        raise AmbientMismatch(
            f"form_dim {form.form_dim} exceeds ambient {ambient_dim}")
    if radical(form).dim != 0:
        raise DegenerateForm(f"{form.kind} form on {form.form_dim} coords "
                             "has a nonzero radical")
    q = field.q
    npr = form.form_dim
    n_points_projected = (q**npr - 1) // (q - 1)
    if n_points_projected > cap:
        raise TooLarge(f"{n_points_projected} candidate points exceed cap {cap}")

    reps = projective_point_reps(field, npr)
    sing_mask = np.array([form.singular_vector(r) for r in reps], dtype=bool)
    point_vecs = reps[sing_mask]
    if point_vecs.shape[0] == 0:
        raise RankZero("the form has no singular points")

    # pad representatives to the ambient dimension
    padded = np.zeros((point_vecs.shape[0], ambient_dim), dtype=np.uint8)
    padded[:, :npr] = point_vecs
    points = [Subspace(field, ambient_dim, v[None, :]) for v in padded]
    order = sorted(range(len(points)), key=lambda i: points[i].key)
    points = [points[i] for i in order]
    padded = padded[order]

    # profile[i] = functional whose kernel is the perp of point i
    profile = form.orthogonal_profile(padded)

    levels: list[list[Subspace]] = [[Subspace.zero(field, ambient_dim)], points]
    extended_all = True
    while True:
        current = levels[-1]
        seen: set = set()
        nxt: list[Subspace] = []
        any_unextended = False
        for S in current:
            grew = False
            # candidates: points orthogonal to every basis row of S
            vals = mat_mul(field, S.basis[:, :npr], profile.T)
            ok = ~(vals != 0).any(axis=0)
            for pi in np.flatnonzero(ok):
                P = points[pi]
                if S.contains(P):
                    continue
                T = S + P
                if T.key in seen:
                    grew = True
                    continue
                seen.add(T.key)
                nxt.append(T)
                grew = True
            if not grew:
                any_unextended = True
        if not nxt:
            break
        if any_unextended:
            extended_all = False
        levels.append(sorted(nxt))

    m = len(levels) - 1
    if not extended_all:
        raise NonUniformMaximals(
            "a totally singular subspace below the top rank cannot be extended")
    if 2 * m > npr:
        raise QGeomError(f"rank {m} exceeds form_dim/2 = {npr / 2}; "
                         "not a polar space")
    lines = levels[2] if m >= 2 else []
    maximals = levels[m]
    return PolarSpace(field, ambient_dim, form, points, lines, m, maximals)


def dual_polar_graph(ps: PolarSpace) -> FiniteGraph:
    """Graph on the maximal totally singular subspaces; adjacency is
    meeting in dimension rank - 1.  Cached on the polar space."""
    if "dual_graph" in ps._cache:
        return ps._cache["dual_graph"]
    m = ps.rank
    verts = ps.maximals
    t = len(verts)
    adj: list[list[int]] = [[] for _ in range(t)]
    for i in range(t):
        for j in range(i + 1, t):
            stacked = np.vstack([verts[i].basis, verts[j].basis])
            if rank(ps.field, stacked) == m + 1:
                adj[i].append(j)
                adj[j].append(i)
    g = FiniteGraph(verts, adj)
    if not g.is_connected():
        raise Disconnected("dual polar graph came out disconnected")
    ps._cache["dual_graph"] = g
    return g


def point_star(ps: PolarSpace, S: Subspace) -> list[Subspace]:
    """All maximal totally singular subspaces containing S."""
    if not is_totally_singular(ps.form, S):
        raise NotSingular("the subspace is not totally singular")
    return [M for M in ps.maximals if M.contains(S)]


def star_restriction(ps: PolarSpace, S: Subspace) -> FiniteGraph:
    """The dual polar graph restricted to the maximals containing S."""
    g = dual_polar_graph(ps)
    idx = [ps.maximal_index(M) for M in point_star(ps, S)]
    return g.subgraph(idx)
