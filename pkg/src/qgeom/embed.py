"""Isometric embeddings of dual polar graphs into Grassmann graphs.

The operations here build, verify, structurally dissect, exhaustively
enumerate, and classify distance-preserving injections of the maximal
totally singular subspaces into a Grassmannian over the same field:

* :func:`canonical_embedding` realizes M -> M + U for a star subspace U
  chosen to avoid every pairwise sum of maximals;
* :func:`extract_star_subspace`, :func:`reduce_to_quotient`,
  :func:`induce_point_map` and :func:`check_line_images` recover, from
  any verified embedding, the common subspace below the image, the
  reduced embedding into the quotient, the induced map on polar points,
  and the fact that whole projective lines map onto whole lines;
* :func:`search_embeddings` runs a distance-pruned backtracking census;
* :func:`connecting_automorphism` produces an explicit semilinear (and,
  when n = 2k, possibly duality-composed) witness carrying one embedding
  to another, certifying that all of them form a single equivalence
  class under Grassmann-graph automorphisms.

Conditions that the mathematics rules out (an image star thinner than
expected, empty point intersections, partial line images, unconnectable
embeddings at exhaustive scale) raise the distinguished TheoryViolation
exceptions rather than passing silently.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import numpy as np

from ._parallel import run_ordered
from .errors import (
    AmbientMismatch,
    Anomaly,
    ContainmentViolation,
    DimensionMismatch,
    DistanceViolation,
    EmptyIntersection,
    LemmaViolation,
    NoValidU,
    NotEquivalent,
    NotInjective,
    PartialLine,
    QGeomError,
    RankTooSmall,
    SearchBudgetExceeded,
    StarViolation,
    TooLarge,
)
from .gf import Field
from .grassmann import (
    DISTANCE_CACHE_CAP,
    gaussian_binomial,
    grassmann_graph_cached,
)
from .polar import PolarSpace, dual_polar_graph
from .subspace import (
    QuotientSpace,
    Subspace,
    _reduce_against,
    reduce_rows_against,
    invert_matrix,
    mat_frobenius,
    mat_mul,
    multi_intersection,
    nullspace,
    projective_point_reps,
    rank,
    rref,
)

BFS_CROSSCHECK_CAP = 400
DEFAULT_WITNESS_BUDGET = 10_000


class Embedding:
    """A table pairing every maximal M with an image subspace f(M).

    ``source`` is the polar space, ``images`` aligns with
    ``source.maximals``, and the target is the Grassmannian of
    ``target_k``-dim subspaces of GF(q)^``target_n``.
    """

    __slots__ = ("source", "field", "target_n", "target_k", "images", "meta",
                 "_key", "_analysis", "_verified", "_invariant")

    def __init__(self, source: PolarSpace, target_k: int, images,
                 target_n: int | None = None, meta: dict | None = None):
        self.source = source
        self.field = source.field
        self.target_k = int(target_k)
        self.target_n = int(target_n if target_n is not None
                            else source.ambient_dim)
        self.images = tuple(images)
        self.meta = dict(meta or {})
        self._key = tuple(s._bytes for s in self.images)
        self._analysis = None
        self._verified = False
        self._invariant = None

    @property
    def key(self) -> tuple:
        return self._key

    def table(self) -> list[tuple[int, Subspace, Subspace]]:
        return [
            (i, M, img)
            for i, (M, img) in enumerate(zip(self.source.maximals, self.images))
        ]

    def as_json_obj(self) -> list[dict]:
        return [
            {
                "source_index": i,
                "source_basis": M.to_rows(),
                "image_basis": img.to_rows(),
            }
            for i, M, img in self.table()
        ]

    def __repr__(self) -> str:
        return (f"Embedding({len(self.images)} maximals -> "
                f"G_{self.target_k}(GF({self.field.q})^{self.target_n}))")


def embedding_from_json_obj(ps: PolarSpace, target_k: int, obj,
                            target_n: int | None = None) -> Embedding:
    """Rebuild an embedding from its JSON table, validating the source side."""
    fieldq = ps.field
    n = target_n if target_n is not None else ps.ambient_dim
    images: list[Subspace | None] = [None] * len(ps.maximals)
    for entry in obj:
        i = int(entry["source_index"])
        M = Subspace.span(fieldq, np.array(entry["source_basis"], dtype=np.uint8))
        if not (0 <= i < len(ps.maximals)) or ps.maximals[i] != M:
            raise DimensionMismatch(
                f"entry {i} does not match the polar space's maximal list")
        images[i] = Subspace.span(
            fieldq, np.array(entry["image_basis"], dtype=np.uint8), n)
    if any(img is None for img in images):
        raise DimensionMismatch("embedding table is not total")
    return Embedding(ps, target_k, images, target_n=n)


# -- verification ------------------------------------------------------------------

def _source_distances_certified(ps: PolarSpace) -> np.ndarray:
    """The m - dim(. ∩ .) table, BFS-certified against the dual polar graph."""
    DS = ps.source_distance_matrix()
    if not ps._cache.get("dmat_bfs_ok"):
        D_bfs = dual_polar_graph(ps).distance_matrix
        if not np.array_equal(DS, D_bfs):
            bad = np.argwhere(DS != D_bfs)[0]
            raise QGeomError(
                f"dual polar BFS distance disagrees with m - dim intersection "
                f"at pair {tuple(int(x) for x in bad)}")
        ps._cache["dmat_bfs_ok"] = True
    return DS


def verify_isometric(e: Embedding, crosscheck: str | bool = "auto") -> dict:
    """Check that the embedding preserves every pairwise distance.

    Distances on the source side are m - dim(M1 ∩ M2) (certified once
    per polar space against BFS on the dual polar graph); on the target
    side k - dim(f(M1) ∩ f(M2)), cross-checked against BFS in the
    Grassmann graph whenever the target is small enough to build
    (``crosscheck=True`` forces it, ``False`` skips it).

    Raises NotInjective or DistanceViolation on the first failure;
    returns a small report dict on success.
    """
    ps = e.source
    k, n = e.target_k, e.target_n
    if len(e.images) != len(ps.maximals):
        raise DimensionMismatch("embedding table is not total")
    for img in e.images:
        if img.ambient_dim != n:
            raise AmbientMismatch(f"image in dimension {img.ambient_dim}, not {n}")
        if img.dim != k:
            raise DimensionMismatch(f"image of dimension {img.dim}, not {k}")
    if len(set(e._key)) != len(e._key):
        raise NotInjective("two maximals share an image")

    DS = _source_distances_certified(ps)
    do_cross = crosscheck is True or (
        crosscheck == "auto"
        and gaussian_binomial(n, k, e.field.q) <= BFS_CROSSCHECK_CAP
    )
    if do_cross:
        G = grassmann_graph_cached(e.field, n, k)
        DT = G.distance_matrix
        idx = [G.index_of(img) for img in e.images]

    t = len(e.images)
    pairs = 0
    for i in range(t):
        for j in range(i + 1, t):
            expected = int(DS[i, j])
            got = k - e.images[i].intersection_dim(e.images[j])
            if got != expected:
                raise DistanceViolation(
                    f"pair ({i}, {j}): source distance {expected}, image "
                    f"distance {got}", (i, j, expected, got))
            if do_cross and int(DT[idx[i], idx[j]]) != got:
                raise QGeomError(
                    f"Grassmann BFS distance disagrees with k - dim "
                    f"intersection at image pair ({i}, {j})")
            pairs += 1
    e._verified = True
    return {"pairs_checked": pairs, "bfs_crosschecked": bool(do_cross)}


# -- canonical construction ----------------------------------------------------------

def find_star_subspaces(ps: PolarSpace, k: int, limit: int | None = 1
                        ) -> list[Subspace]:
    """(k-m)-dim subspaces U with U ∩ (M1 + M2) = 0 for every pair of maximals.

    Candidate vectors are tried in ascending lexicographic order with
    backtracking, so the first result is deterministic.  ``limit=None``
    enumerates the whole search space (the test-suite oracle).
    """
    m = ps.rank
    n = ps.ambient_dim
    if k < m:
        raise RankTooSmall(f"k = {k} below the polar rank m = {m}")
    d = k - m
    if d == 0:
        return [Subspace.zero(ps.field, n)]
    fieldq = ps.field
    maxls = ps.maximals
    pair_states = []
    for i in range(len(maxls)):
        for j in range(i, len(maxls)):
            R, piv = rref(fieldq, np.vstack([maxls[i].basis, maxls[j].basis]))
            pair_states.append((R, piv))

    reps = projective_point_reps(fieldq, n)
    found: list[Subspace] = []
    seen: set = set()

    def admissible(states, v) -> bool:
        for R, piv in states:
            if not _reduce_against(fieldq, R, piv, v).any():
                return False
        return True

    def grow(states, start, rows):
        if len(rows) == d:
            # one subspace can arise from several generating sequences
            U = Subspace.span(fieldq, np.array(rows, dtype=np.uint8), n)
            if U not in seen:
                seen.add(U)
                found.append(U)
            return limit is not None and len(found) >= limit
        for t in range(start, reps.shape[0]):
            v = reps[t]
            if not admissible(states, v):
                continue
            nxt = [rref(fieldq, np.vstack([R, v[None, :]]))
                   for R, _ in states]
            if grow(nxt, t + 1, rows + [v]):
                return True
        return False

    grow(pair_states, 0, [])
    return found


def canonical_embedding(ps: PolarSpace, k: int) -> Embedding:
    """The embedding M -> M + U for the first valid star subspace U.

    Raises RankTooSmall when k < m, and NoValidU when the exhaustive
    U-search comes up empty (reported, never silently approximated).
    The returned embedding has passed verify_isometric.
    """
    key = ("canonical", k)
    if key in ps._cache:
        return ps._cache[key]
    us = find_star_subspaces(ps, k, limit=1)
    if not us:
        raise NoValidU(
            f"no {k - ps.rank}-dim subspace avoids all pairwise sums of maximals")
    U = us[0]
    images = [M + U for M in ps.maximals]
    e = Embedding(ps, k, images, meta={"construction": "M+U", "u_basis": U.to_rows()})
    verify_isometric(e)
    ps._cache[key] = e
    return e


# -- structural dissection (star subspace, quotient, point map, lines) ---------------

def extract_star_subspace(e: Embedding) -> Subspace:
    """U := the intersection of all images.

    For an isometric embedding this must have dimension at least k - m;
    smaller is a LemmaViolation (highest severity), strictly larger is
    surfaced as an Anomaly for inspection.
    """
    if not e._verified:
        verify_isometric(e)
    U = multi_intersection(list(e.images))
    expected = e.target_k - e.source.rank
    if U.dim < expected:
        raise LemmaViolation(
            f"common subspace of the images has dimension {U.dim} < "
            f"k - m = {expected}")
    if U.dim > expected:
        raise Anomaly(
            f"common subspace dimension {U.dim} exceeds k - m = {expected}",
            {"dim": U.dim, "expected": expected})
    return U


def reduce_to_quotient(e: Embedding, U: Subspace) -> Embedding:
    """The reduced embedding g(M) = f(M)/U into the m-Grassmannian of W = V/U."""
    ps = e.source
    d = e.target_k - ps.rank
    if U.dim != d:
        raise DimensionMismatch(f"U has dimension {U.dim}, expected k - m = {d}")
    for i, img in enumerate(e.images):
        if not img.contains(U):
            raise StarViolation(f"image {i} does not contain U")
    qs = QuotientSpace(e.target_n, U)
    images = [qs.project(img) for img in e.images]
    g = Embedding(ps, ps.rank, images, target_n=qs.dim,
                  meta={"quotient": qs, "parent": e})
    verify_isometric(g)
    return g


def induce_point_map(g: Embedding) -> tuple[Subspace, ...]:
    """q(P) := the common 1-dim subspace of the images over the star of P.

    For every polar point P, intersects g(M) over the maximals M
    containing P.  A zero intersection contradicts the structure theory
    (EmptyIntersection, highest severity); an intersection of dimension
    above one is surfaced as an Anomaly; a collision between two points
    raises NotInjective.
    """
    ps = g.source
    out: list[Subspace] = []
    for i in range(len(ps.points)):
        through = ps.maximals_through_point(i)
        inter = multi_intersection([g.images[t] for t in through])
        if inter.dim == 0:
            raise EmptyIntersection(
                f"images over the star of point {i} intersect only in zero")
        if inter.dim > 1:
            raise Anomaly(
                f"images over the star of point {i} intersect in dimension "
                f"{inter.dim}", {"point": i, "dim": inter.dim})
        out.append(inter)
    if len({s._bytes for s in out}) != len(out):
        raise NotInjective("the induced point map collides")
    return tuple(out)


def check_line_images(ps: PolarSpace, g: Embedding, q_map) -> dict:
    """Verify collinearity containments and that lines map onto full lines.

    For every collinear pair (P, Q) and every maximal M over their span:
    g(M) must contain q(P) + q(Q), else ContainmentViolation.  For every
    line: its q+1 point images must be exactly the q+1 one-dim
    subspaces of a single 2-dim subspace of W; anything else is a
    PartialLine, which is impossible over a finite field.
    """
    fieldq = ps.field
    pair_checks = 0
    for l in range(len(ps.lines)):
        pts = ps.line_point_indices(l)
        maxls = ps.maximals_through_line(l)
        for a in range(len(pts)):
            for b in range(a + 1, len(pts)):
                span2 = q_map[pts[a]] + q_map[pts[b]]
                for t in maxls:
                    if not g.images[t].contains(span2):
                        raise ContainmentViolation(
                            f"image of maximal {t} misses q(P) + q(Q) for "
                            f"points ({pts[a]}, {pts[b]})",
                            (pts[a], pts[b], t))
                    pair_checks += 1
    full_lines = 0
    for l in range(len(ps.lines)):
        pts = ps.line_point_indices(l)
        image_points = {q_map[i]._bytes for i in pts}
        stacked = np.vstack([q_map[i].basis for i in pts])
        span = Subspace.span(fieldq, stacked, g.target_n)
        if span.dim != 2 or len(image_points) != fieldq.q + 1:
            raise PartialLine(
                f"line {l} maps to {len(image_points)} points spanning "
                f"dimension {span.dim}; a full line has {fieldq.q + 1} "
                "points in dimension 2")
        expected = {
            Subspace.span(fieldq, v, g.target_n)._bytes
            for v in mat_mul(fieldq, projective_point_reps(fieldq, 2), span.basis)
        }
        if image_points != expected:
            raise PartialLine(f"line {l} image is a proper subset of a line")
        full_lines += 1
    return {
        "lines_checked": len(ps.lines),
        "full_lines": full_lines,
        "containments_checked": pair_checks,
        "lines_ok": True,
    }


def polar_span(ps: PolarSpace, check: bool = True) -> Subspace:
    """Span of all polar points; equals the form's support prefix."""
    if not ps.points:
        return Subspace.zero(ps.field, ps.ambient_dim)
    stacked = np.vstack([p.basis for p in ps.points])
    span = Subspace.span(ps.field, stacked, ps.ambient_dim)
    if check and span != ps.v_prime:
        raise Anomaly(
            f"points span dimension {span.dim}, configured support has "
            f"dimension {ps.v_prime.dim}", {"span": span.to_rows()})
    return span


@dataclass
class StructureReport:
    """Everything the structural pipeline recovers from one embedding."""

    embedding: Embedding
    star_subspace: Subspace
    quotient: QuotientSpace
    reduced: Embedding
    point_map: tuple[Subspace, ...]
    lines_ok: bool
    w_prime: Subspace
    v_prime: Subspace
    line_stats: dict = dc_field(default_factory=dict)

    def as_json_obj(self) -> dict:
        return {
            "U": self.star_subspace.to_rows(),
            "W": {
                "dim": self.quotient.dim,
                "coordinate_map": [
                    [int(x) for x in row] for row in self.quotient.coordinate_map
                ],
            },
            "g_table": self.reduced.as_json_obj(),
            "q_map": [s.to_rows()[0] for s in self.point_map],
            "lines_ok": self.lines_ok,
            "W_prime": self.w_prime.to_rows(),
            "V_prime": self.v_prime.to_rows(),
        }


def analyze_embedding(e: Embedding) -> StructureReport:
    """Run the full structural pipeline; cached on the embedding."""
    if e._analysis is not None:
        return e._analysis
    ps = e.source
    U = extract_star_subspace(e)
    g = reduce_to_quotient(e, U)
    q_map = induce_point_map(g)
    line_stats = check_line_images(ps, g, q_map)
    w_prime = Subspace.span(
        e.field, np.vstack([s.basis for s in q_map]), g.target_n)
    report = StructureReport(
        embedding=e,
        star_subspace=U,
        quotient=g.meta["quotient"],
        reduced=g,
        point_map=q_map,
        lines_ok=line_stats["lines_ok"],
        w_prime=w_prime,
        v_prime=polar_span(ps),
        line_stats=line_stats,
    )
    e._analysis = report
    return report


# -- exhaustive search ---------------------------------------------------------------

@dataclass
class SearchResult:
    embeddings: list[Embedding]
    anchored: bool
    anchor_index: int | None
    nodes: int
    index_tuples: list[tuple[int, ...]] = dc_field(default_factory=list)

    def __len__(self) -> int:
        return len(self.embeddings)

    def __iter__(self):
        return iter(self.embeddings)


def _initial_future(DT, DS, prefix, t0):
    T = DS.shape[0]
    N = DT.shape[0]
    fut = np.ones((T - t0, N), dtype=bool)
    for s, v in enumerate(prefix):
        fut &= DT[v][None, :] == DS[s, t0:][:, None]
    return fut


def _distance_dfs(DT, DS, prefix, future, out) -> int:
    """Backtracking census; appends full index tuples to out, returns node count."""
    T = DS.shape[0]
    t0 = len(prefix)
    nodes = 0
    assign = list(prefix)

    def rec(t, fut):
        nonlocal nodes
        cand = np.flatnonzero(fut[0])
        if t == T - 1:
            nodes += len(cand)
            for v in cand:
                out.append(tuple(assign) + (int(v),))
            return
        for v in cand:
            nodes += 1
            nf = fut[1:] & (DT[v][None, :] == DS[t, t + 1:][:, None])
            if not nf.any(axis=1).all():
                continue
            assign.append(int(v))
            rec(t + 1, nf)
            assign.pop()

    if t0 == T:
        out.append(tuple(assign))
        return 0
    rec(t0, future)
    return nodes


def _search_chunk(args):
    DT, DS, prefix, chunk = args
    out: list[tuple[int, ...]] = []
    nodes = 0
    t0 = len(prefix)
    for v in chunk:
        pre = list(prefix) + [int(v)]
        fut = _initial_future(DT, DS, pre, t0 + 1)
        if fut.any(axis=1).all():
            nodes += _distance_dfs(DT, DS, pre, fut, out)
    return out, nodes


def search_embeddings(ps: PolarSpace, n: int, k: int, anchor: bool = True,
                      workers: int = 1,
                      cap: int = DISTANCE_CACHE_CAP) -> SearchResult:
    """Enumerate isometric embeddings by distance-pruned backtracking.

    Images are assigned to maximals in the canonical order; a partial
    assignment survives only while every pairwise distance matches.
    With ``anchor=True`` the image of the first maximal is pinned to the
    canonical embedding's first image, which is sound for counting
    equivalence classes because the Grassmann graph is vertex-transitive
    under invertible linear maps.  Results come back in lexicographic
    index order regardless of the worker count.
    """
    if n != ps.ambient_dim:
        raise AmbientMismatch(
            f"polar space lives in dimension {ps.ambient_dim}, not {n}")
    if k < ps.rank:
        raise RankTooSmall(f"k = {k} below the polar rank m = {ps.rank}")
    if gaussian_binomial(n, k, ps.field.q) > cap:
        raise TooLarge("target Grassmann graph exceeds the distance cache cap")

    target = grassmann_graph_cached(ps.field, n, k)
    DT = target.distance_matrix
    DS = _source_distances_certified(ps)

    anchored = False
    anchor_index = None
    prefix: list[int] = []
    if anchor:
        try:
            f0 = canonical_embedding(ps, k)
            anchor_index = target.index_of(f0.images[0])
            prefix = [anchor_index]
            anchored = True
        except NoValidU:
            # no canonical anchor exists; fall back to the full census,
            # which will simply come back empty if no embedding exists
            anchored = False

    t0 = len(prefix)
    fut = _initial_future(DT, DS, prefix, t0)
    tuples: list[tuple[int, ...]] = []
    total_nodes = 0
    if DS.shape[0] == t0:
        tuples.append(tuple(prefix))
    else:
        cand = np.flatnonzero(fut[0])
        if workers <= 1:
            total_nodes = _distance_dfs(DT, DS, prefix, fut, tuples)
        else:
            chunks = [c for c in np.array_split(cand, workers * 4) if len(c)]
            tasks = [(DT, DS, tuple(prefix), [int(x) for x in c]) for c in chunks]
            for out, nodes in run_ordered(_search_chunk, tasks, workers):
                tuples.extend(out)
                total_nodes += nodes

    embeddings = [
        Embedding(ps, k, [target.vertices[v] for v in tup],
                  meta={"anchored": anchored, "anchor_index": anchor_index})
        for tup in tuples
    ]
    return SearchResult(embeddings, anchored, anchor_index, total_nodes, tuples)


# -- equivalence witnesses -------------------------------------------------------------

class EquivalenceWitness:
    """An explicit Grassmann-graph automorphism connecting two embeddings.

    Acts on a subspace X as sigma(ann^d(X)) where sigma is the
    semilinear map x -> matrix @ x^(p^frob_power) and d marks an
    optional annihilator-duality factor (only meaningful when n = 2k).
    Witnesses compose and invert exactly, so chains of verified
    witnesses stay trustworthy.
    """

    __slots__ = ("field", "matrix", "frob_power", "dual")

    def __init__(self, field: Field, matrix, frob_power: int = 0,
                 dual: bool = False):
        self.field = field
        M = np.asarray(matrix, dtype=np.uint8).copy()
        M.setflags(write=False)
        self.matrix = M
        self.frob_power = int(frob_power) % field.e
        self.dual = bool(dual)

    @classmethod
    def identity(cls, field: Field, n: int) -> "EquivalenceWitness":
        return cls(field, np.eye(n, dtype=np.uint8))

    def apply_to_subspace(self, S: Subspace) -> Subspace:
        B = S.basis
        if self.dual:
            B = nullspace(self.field, B)
        rows = mat_mul(self.field, mat_frobenius(self.field, B, self.frob_power),
                       self.matrix.T)
        return Subspace.span(self.field, rows, S.ambient_dim) if rows.shape[0] \
            else Subspace.zero(self.field, S.ambient_dim)

    def compose(self, other: "EquivalenceWitness") -> "EquivalenceWitness":
        """self after other: (self.compose(other))(X) = self(other(X))."""
        f = self.field
        if self.dual:
            s1 = invert_matrix(f, other.matrix.T)
        else:
            s1 = other.matrix
        if self.frob_power:
            s1 = mat_frobenius(f, s1, self.frob_power)
        mat = mat_mul(f, self.matrix, s1)
        return EquivalenceWitness(
            f, mat, self.frob_power + other.frob_power, self.dual ^ other.dual)

    def inverse(self) -> "EquivalenceWitness":
        f = self.field
        tp = (f.e - self.frob_power) % f.e
        mat = mat_frobenius(f, invert_matrix(f, self.matrix), tp)
        if self.dual:
            mat = invert_matrix(f, mat.T)
        return EquivalenceWitness(f, mat, tp, self.dual)

    def maps_onto(self, S: Subspace, T: Subspace) -> bool:
        """Does this witness carry S exactly onto T?

        Images of an invertible (semi)linear map keep their dimension,
        so containment of the transformed basis rows in T plus equal
        dimensions settles equality without re-canonicalizing.
        """
        B = S.annihilator().basis if self.dual else S.basis
        if B.shape[0] != T.dim:
            return False
        if self.frob_power:
            B = mat_frobenius(self.field, B, self.frob_power)
        rows = mat_mul(self.field, B, self.matrix.T)
        return not reduce_rows_against(self.field, T.basis, T.pivots, rows).any()

    def verify_on(self, f1: Embedding, f2: Embedding) -> bool:
        return all(
            self.maps_onto(a, b) for a, b in zip(f1.images, f2.images)
        )

    def as_json_obj(self) -> dict:
        return {
            "matrix": [[int(x) for x in row] for row in self.matrix],
            "frobenius_power": self.frob_power,
            "duality": self.dual,
        }

    def __repr__(self) -> str:
        return (f"EquivalenceWitness(frob={self.frob_power}, dual={self.dual}, "
                f"matrix={self.matrix.tolist()})")


def _dualized(e: Embedding) -> Embedding:
    # memoized: repeat witness fits against one embedding reuse its
    # dual's cached analysis
    cached = e.meta.get("dualized")
    if cached is None:
        images = [img.annihilator() for img in e.images]
        cached = Embedding(e.source, e.target_n - e.target_k, images,
                           target_n=e.target_n, meta={"dualized_from": e})
        e.meta["dualized"] = cached
    return cached


def _coords_in_rref(basis: np.ndarray, pivots: list[int], v: np.ndarray) -> np.ndarray:
    # for RREF bases, coordinates are read off the pivot columns
    return v[pivots]


def _fit_semilinear(fa: Embedding, fb: Embedding, budget_state: list[int],
                    budget: int) -> EquivalenceWitness | None:
    """Semilinear witness with fa -> fb, or None; structure-guided.

    The induced point maps pin the witness on the span of the point
    images: solving A x_P^(p^t) = lambda_P y_P exactly (a linear system
    in A and the lambdas) recovers the collineation, and any transversal
    correspondence completes it off that span.  Every candidate is fully
    verified on the embedding tables before being returned.
    """
    f = fa.field
    Ra = analyze_embedding(fa)
    Rb = analyze_embedding(fb)
    w = Ra.quotient.dim
    r = Ra.w_prime.dim
    if r != Rb.w_prime.dim:
        return None
    npts = len(Ra.point_map)
    Ba, piv_a = Ra.w_prime.basis, Ra.w_prime.pivots
    Bb, piv_b = Rb.w_prime.basis, Rb.w_prime.pivots
    xs = np.stack([
        _coords_in_rref(Ba, piv_a, s.basis[0]) for s in Ra.point_map])
    ys = np.stack([
        _coords_in_rref(Bb, piv_b, s.basis[0]) for s in Rb.point_map])

    qs_wa = QuotientSpace(w, Ra.w_prime)
    qs_wb = QuotientSpace(w, Rb.w_prime)
    lift_va = Ra.quotient.lift_matrix()
    lift_vb = Rb.quotient.lift_matrix()
    Ua, Ub = Ra.star_subspace, Rb.star_subspace
    negT = f.neg_table

    for tau in range(f.e):
        xs_t = f.frob_table[tau][xs]
        # unknowns: vec(A) (r*r) then lambda_P (npts)
        system = np.zeros((npts * r, r * r + npts), dtype=np.uint8)
        for P in range(npts):
            for i in range(r):
                row = system[P * r + i]
                row[i * r: (i + 1) * r] = xs_t[P]
                row[r * r + P] = negT[ys[P, i]]
        kernel = nullspace(f, system)
        if kernel.shape[0] == 0:
            continue
        K = Subspace(f, kernel.shape[1], kernel)
        for u in K.all_vectors():
            if not u.any():
                continue
            budget_state[0] += 1
            if budget_state[0] > budget:
                raise SearchBudgetExceeded(
                    f"witness search passed {budget} candidates")
            lam = u[r * r:]
            if (lam == 0).any():
                continue
            A = u[: r * r].reshape(r, r)
            if rank(f, A) < r:
                continue
            # sigma on W: point-image span via A, any transversal beyond
            D_W = np.vstack([Ba, qs_wa.lift_matrix()])
            T_W = np.vstack([mat_mul(f, A.T, Bb), qs_wb.lift_matrix()])
            M_W = mat_mul(f, T_W.T,
                          invert_matrix(f, mat_frobenius(f, D_W, tau).T))
            # lift to V through the two quotient transversals
            D_V = np.vstack([lift_va, Ua.basis])
            T_V = np.vstack([mat_mul(f, M_W.T, lift_vb), Ub.basis])
            M_V = mat_mul(f, T_V.T,
                          invert_matrix(f, mat_frobenius(f, D_V, tau).T))
            witness = EquivalenceWitness(f, M_V, tau, dual=False)
            if witness.verify_on(fa, fb):
                return witness
    return None


_STRUCTURE_FAILURES = (LemmaViolation, EmptyIntersection, PartialLine,
                       ContainmentViolation, Anomaly, NotInjective)


def _class_invariant(e: Embedding) -> tuple:
    """Cheap automorphism invariant: (common intersection dim, span dim).

    Semilinear maps preserve both quantities; the duality (available as a
    graph automorphism only when n = 2k) swaps dim-of-intersection with
    codim-of-span, so in that case the sorted pair is used.  Cached on
    the embedding.
    """
    if e._invariant is None:
        d_star = multi_intersection(list(e.images)).dim
        stacked = np.vstack([img.basis for img in e.images])
        d_span = rank(e.field, stacked)
        if e.target_n == 2 * e.target_k:
            e._invariant = tuple(sorted((d_star, e.target_n - d_span)))
        else:
            e._invariant = (d_star, d_span)
    return e._invariant


def _construct_witness(fa: Embedding, fb: Embedding,
                       budget: int) -> EquivalenceWitness:
    """Structure-guided witness search, in three strategies.

    1. Fit on the embeddings themselves (works when the image family has
       the expected star structure).
    2. Fit on the annihilator duals and conjugate back; the dual family
       can carry the structure when the original does not.
    3. When n = 2k, fit the dual of one side against the other, giving a
       duality-composed witness.
    """
    if _class_invariant(fa) != _class_invariant(fb):
        raise NotEquivalent(
            f"automorphism invariants differ: {_class_invariant(fa)} vs "
            f"{_class_invariant(fb)}")
    f = fa.field
    budget_state = [0]
    try:
        witness = _fit_semilinear(fa, fb, budget_state, budget)
        if witness is not None:
            return witness
    except _STRUCTURE_FAILURES:
        pass
    try:
        w0 = _fit_semilinear(_dualized(fa), _dualized(fb), budget_state, budget)
        if w0 is not None:
            # ann ∘ sigma_M = sigma_{(M^T)^-1} ∘ ann, so undoing the two
            # annihilators turns the dual-side witness into a direct one
            witness = EquivalenceWitness(
                f, invert_matrix(f, w0.matrix.T), w0.frob_power, dual=False)
            if witness.verify_on(fa, fb):
                return witness
    except _STRUCTURE_FAILURES:
        pass
    if fa.target_n == 2 * fa.target_k:
        try:
            w0 = _fit_semilinear(_dualized(fa), fb, budget_state, budget)
        except _STRUCTURE_FAILURES:
            w0 = None
        if w0 is not None:
            witness = EquivalenceWitness(f, w0.matrix, w0.frob_power,
                                         dual=True)
            if witness.verify_on(fa, fb):
                return witness
    raise NotEquivalent(
        "no semilinear (or duality-composed) automorphism maps one table "
        "to the other")


def _base_witness_pair(ps: PolarSpace, base: Embedding, e: Embedding,
                       budget: int):
    """(witness base->e, its inverse), memoized on the polar space."""
    key = ("witness", e.target_n, e.target_k, base._key, e._key)
    if key not in ps._cache:
        if e._key == base._key:
            w = EquivalenceWitness.identity(ps.field, e.target_n)
        else:
            w = _construct_witness(base, e, budget)
        ps._cache[key] = (w, w.inverse())
    return ps._cache[key]


def connecting_automorphism(f1: Embedding, f2: Embedding,
                            budget: int = DEFAULT_WITNESS_BUDGET,
                            full_verify: bool = False) -> EquivalenceWitness:
    """An explicit automorphism s with s(f1(M)) = f2(M) for every maximal.

    Freshly constructed witnesses are always verified on the whole
    table.  Repeat queries against the same source go through memoized,
    fully verified witnesses to a common reference embedding and are
    composed exactly; set ``full_verify=True`` to re-verify such a
    composite on the whole table as well (it is always spot-checked on
    one image).

    Raises NotEquivalent when the structure-guided search exhausts all
    candidates, and SearchBudgetExceeded when it runs out of budget
    before a verdict.
    """
    if f1.source is not f2.source:
        raise AmbientMismatch("embeddings come from different polar spaces")
    if (f1.target_n, f1.target_k) != (f2.target_n, f2.target_k):
        raise DimensionMismatch("embeddings target different Grassmannians")
    ps = f1.source
    if f1._key == f2._key:
        return EquivalenceWitness.identity(ps.field, f1.target_n)
    if _class_invariant(f1) != _class_invariant(f2):
        raise NotEquivalent(
            f"automorphism invariants differ: {_class_invariant(f1)} vs "
            f"{_class_invariant(f2)}")
    base = f1
    if f1.target_n == ps.ambient_dim:
        try:
            cand = canonical_embedding(ps, f1.target_k)
            if _class_invariant(cand) == _class_invariant(f1):
                base = cand
        except NoValidU:
            pass
    w1, w1_inv = _base_witness_pair(ps, base, f1, budget)
    w2, _ = _base_witness_pair(ps, base, f2, budget)
    s = w2.compose(w1_inv)
    if not s.maps_onto(f1.images[0], f2.images[0]):
        raise QGeomError("witness composition failed its spot check")
    if full_verify and not s.verify_on(f1, f2):
        raise QGeomError("composite witness failed full verification")
    return s


def witness_kind(w: EquivalenceWitness) -> str:
    if w.dual:
        return "duality"
    if w.frob_power:
        return "semilinear"
    n = w.matrix.shape[0]
    if np.array_equal(w.matrix, np.eye(n, dtype=np.uint8)):
        return "identity"
    return "linear"


def classify_embeddings(embeddings: list[Embedding],
                        budget: int = DEFAULT_WITNESS_BUDGET) -> dict:
    """Partition embeddings into explicit-witness equivalence classes.

    Every member is connected to its class representative by a real
    witness; representatives of distinct classes have either different
    automorphism invariants or a genuinely exhausted witness search
    between them.  Deterministic: classes are discovered in input order.
    """
    classes: list[dict] = []
    for idx, e in enumerate(embeddings):
        inv = _class_invariant(e)
        placed = False
        for cl in classes:
            if cl["invariant"] != inv:
                continue
            rep = embeddings[cl["rep"]]
            try:
                w = connecting_automorphism(rep, e, budget=budget)
            except NotEquivalent:
                continue
            cl["size"] += 1
            kind = witness_kind(w)
            cl["witness_kinds"][kind] = cl["witness_kinds"].get(kind, 0) + 1
            placed = True
            break
        if not placed:
            classes.append({
                "rep": idx,
                "size": 1,
                "invariant": inv,
                "witness_kinds": {},
            })
    return {
        "equivalence_classes": len(classes),
        "classes": [
            {
                "representative_index": cl["rep"],
                "size": cl["size"],
                "invariant": list(cl["invariant"]),
                "witness_kinds": dict(sorted(cl["witness_kinds"].items())),
            }
            for cl in classes
        ],
    }
