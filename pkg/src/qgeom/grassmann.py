"""Grassmannians and Grassmann graphs over GF(q).

Enumerates all k-dimensional subspaces of GF(q)^n by direct construction
of RREF patterns (choose pivot columns, fill the free cells), builds the
graph whose edges join subspaces meeting in dimension k-1, and provides
two independent distance computations: the closed form k - dim(A ∩ B)
and plain breadth-first search.  Also: stars, the annihilator duality,
and the empirical distance-regularity check.
"""

from __future__ import annotations

import warnings
from collections import deque
from functools import lru_cache
from itertools import combinations

import numpy as np

from ._parallel import run_ordered
from .errors import BadIndex, Disconnected, DimensionMismatch, NotDistanceRegular, TooLarge
from .gf import Field
from .subspace import QuotientSpace, Subspace, rank

DEFAULT_ENUM_CAP = 10**6
DISTANCE_CACHE_CAP = 5000


def gaussian_binomial(n: int, k: int, q: int) -> int:
    """Number of k-dim subspaces of GF(q)^n, by the exact product formula."""
    if k < 0 or k > n:
        return 0
    num = 1
    den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    assert num % den == 0
    return num // den


# -- enumeration ----------------------------------------------------------------

def iter_rref_batches(field: Field, n: int, k: int):
    """Yield batches of RREF matrices, one batch per pivot-column pattern.

    Every k-dim subspace of GF(q)^n appears exactly once across all
    batches: distinct patterns give distinct pivot sets, and within a
    pattern the free cells take every value combination.
    """
    q = field.q
    if k == 0:
        yield np.zeros((1, 0, n), dtype=np.uint8)
        return
    for pivots in combinations(range(n), k):
        free = [
            (i, j)
            for i in range(k)
            for j in range(pivots[i] + 1, n)
            if j not in pivots
        ]
        f = len(free)
        count = q**f
        batch = np.zeros((count, k, n), dtype=np.uint8)
        batch[:, np.arange(k), pivots] = 1
        if f:
            combos = np.array(
                np.unravel_index(np.arange(count), (q,) * f), dtype=np.uint8
            )
            for t, (i, j) in enumerate(free):
                batch[:, i, j] = combos[t]
        yield batch


def enum_grassmannian(field: Field, n: int, k: int,
                      cap: int = DEFAULT_ENUM_CAP) -> list[Subspace]:
    """All k-dim subspaces of GF(q)^n in canonical (entry-lex) order."""
    if not 0 <= k <= n:
        raise DimensionMismatch(f"need 0 <= k <= n, got k={k}, n={n}")
    projected = gaussian_binomial(n, k, field.q)
    if projected > cap:
        raise TooLarge(f"{projected} subspaces exceed the cap {cap}")
    out = []
    for batch in iter_rref_batches(field, n, k):
        for mat in batch:
            out.append(Subspace(field, n, mat))
    out.sort()
    return out


def count_by_enumeration(field: Field, n: int, k: int,
                         cap: int = DEFAULT_ENUM_CAP) -> int:
    """Count subspaces by materializing the enumeration batches.

    Independent of :func:`gaussian_binomial` (no product formula): the
    batches are concretely constructed and their rows counted.
    """
    if not 0 <= k <= n:
        return 0
    total = 0
    for batch in iter_rref_batches(field, n, k):
        total += batch.shape[0]
        if total > cap:
            raise TooLarge(f"enumeration passed the cap {cap}")
    return total


# -- graphs ----------------------------------------------------------------------

class FiniteGraph:
    """Immutable vertex-indexed graph with cached distance access.

    Vertices may be any hashable labels (Subspace, usually).  Pairwise
    distances are precomputed by BFS and cached when the vertex count is
    at most ``DISTANCE_CACHE_CAP``; beyond that, BFS runs on demand.
    """

    def __init__(self, vertices, adjacency):
        self.vertices = tuple(vertices)
        self.adj = tuple(
            np.array(sorted(int(x) for x in nbrs), dtype=np.int32)
            for nbrs in adjacency
        )
        if len(self.adj) != len(self.vertices):
            raise DimensionMismatch("adjacency length != vertex count")
        self._index = {v: i for i, v in enumerate(self.vertices)}
        self._dist: np.ndarray | None = None

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    def index_of(self, v) -> int:
        return self._index[v]

    def degree_sequence(self) -> list[int]:
        return [len(a) for a in self.adj]

    def edges(self) -> list[tuple[int, int]]:
        out = []
        for u, nbrs in enumerate(self.adj):
            for v in nbrs:
                if u < v:
                    out.append((u, int(v)))
        return out

    def _check_index(self, a: int) -> None:
        if not 0 <= a < self.n_vertices:
            raise BadIndex(f"vertex {a} out of range [0, {self.n_vertices})")

    def _bfs_row(self, source: int) -> np.ndarray:
        dist = np.full(self.n_vertices, -1, dtype=np.int16)
        dist[source] = 0
        queue = deque([source])
        while queue:
            u = queue.popleft()
            du = dist[u] + 1
            for v in self.adj[u]:
                if dist[v] < 0:
                    dist[v] = du
                    queue.append(int(v))
        return dist

    @property
    def distance_matrix(self) -> np.ndarray:
        """All-pairs BFS distances, -1 for unreachable; cached."""
        if self._dist is None:
            if self.n_vertices > DISTANCE_CACHE_CAP:
                raise TooLarge(
                    f"{self.n_vertices} vertices exceed the distance cache cap")
            D = np.vstack([self._bfs_row(s) for s in range(self.n_vertices)])
            D.setflags(write=False)
            self._dist = D
        return self._dist

    def bfs_distance(self, a: int, b: int) -> int | None:
        """Shortest-path length, or None if unreachable."""
        self._check_index(a)
        self._check_index(b)
        if self._dist is not None or self.n_vertices <= DISTANCE_CACHE_CAP:
            d = int(self.distance_matrix[a, b])
        else:
            d = int(self._bfs_row(a)[b])
        return None if d < 0 else d

    def is_connected(self) -> bool:
        if self.n_vertices == 0:
            return True
        return bool((self._bfs_row(0) >= 0).all())

    def diameter(self) -> int:
        D = self.distance_matrix
        if (D < 0).any():
            raise Disconnected("diameter of a disconnected graph")
        return int(D.max())

    def subgraph(self, indices: list[int]) -> "FiniteGraph":
        """Restriction to the given vertices (order preserved)."""
        pos = {int(i): t for t, i in enumerate(indices)}
        adj = [
            [pos[int(v)] for v in self.adj[int(i)] if int(v) in pos]
            for i in indices
        ]
        return FiniteGraph([self.vertices[int(i)] for i in indices], adj)


def intersection_numbers(g: FiniteGraph) -> dict[int, tuple[int, int, int]]:
    """Empirical intersection array {i: (c_i, a_i, b_i)}.

    For every vertex pair at distance i, counts the neighbors of the
    second vertex at distances i-1, i, i+1 from the first.  Succeeds iff
    the counts are constant over all pairs; no closed formulas are
    assumed anywhere.
    """
    if not g.is_connected():
        raise Disconnected("intersection numbers need a connected graph")
    D = g.distance_matrix
    diam = int(D.max())
    table: dict[int, tuple[int, int, int]] = {}
    witness: dict[int, tuple[int, int]] = {}
    n = g.n_vertices
    for u in range(n):
        row = D[u]
        for v in range(n):
            i = int(row[v])
            if i == 0:
                continue
            dw = row[g.adj[v]]
            c = int((dw == i - 1).sum())
            a = int((dw == i).sum())
            b = int((dw == i + 1).sum())
            if i not in table:
                table[i] = (c, a, b)
                witness[i] = (u, v)
            elif table[i] != (c, a, b):
                raise NotDistanceRegular(
                    f"distance-{i} counts differ: pair {witness[i]} gives "
                    f"{table[i]}, pair {(u, v)} gives {(c, a, b)}",
                    (i, witness[i] + table[i], (u, v, (c, a, b))),
                )
    return {i: table[i] for i in sorted(table)}


# -- Grassmann graphs ---------------------------------------------------------------

def _adjacency_edges_chunk(args) -> list[tuple[int, int]]:
    field, stacked, k, lo, hi = args
    edges = []
    n_vertices = stacked.shape[0]
    for i in range(lo, hi):
        a = stacked[i]
        for j in range(i + 1, n_vertices):
            merged = np.vstack([a, stacked[j]])
            if rank(field, merged) == k + 1:
                edges.append((i, j))
    return edges


def _pairwise_edges(field: Field, vertices: list[Subspace], k: int,
                    workers: int = 1) -> list[list[int]]:
    """Adjacency lists for 'intersection has dimension k-1' on k-dim vertices."""
    n_vertices = len(vertices)
    if n_vertices == 0:
        return []
    stacked = np.stack([v.basis for v in vertices])
    n_chunks = max(workers * 4, 1) if workers > 1 else 1
    bounds = np.linspace(0, n_vertices, n_chunks + 1).astype(int)
    tasks = [
        (field, stacked, k, int(lo), int(hi))
        for lo, hi in zip(bounds[:-1], bounds[1:])
        if hi > lo
    ]
    adj: list[list[int]] = [[] for _ in range(n_vertices)]
    for chunk in run_ordered(_adjacency_edges_chunk, tasks, workers):
        for i, j in chunk:
            adj[i].append(j)
            adj[j].append(i)
    return adj


class GrassmannGraph(FiniteGraph):
    """The graph on all k-dim subspaces of GF(q)^n, adjacency = meeting in dim k-1."""

    def __init__(self, field: Field, n: int, k: int, workers: int = 1,
                 cap: int = DEFAULT_ENUM_CAP):
        if not (1 < k < n - 1):
            warnings.warn(
                f"Gamma_{k}(GF({field.q})^{n}) is complete or trivial for k={k}; "
                "proceeding anyway", stacklevel=2)
        self.field = field
        self.n = n
        self.k = k
        vertices = enum_grassmannian(field, n, k, cap=cap)
        adj = _pairwise_edges(field, vertices, k, workers=workers)
        super().__init__(vertices, adj)


@lru_cache(maxsize=32)
def grassmann_graph_cached(field: Field, n: int, k: int) -> GrassmannGraph:
    """Shared per-(field, n, k) graph; the embed module leans on it."""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return GrassmannGraph(field, n, k)


def grassmann_distance(A: Subspace, B: Subspace) -> int:
    """Graph distance in the Grassmann graph: k - dim(A ∩ B)."""
    if A.dim != B.dim:
        raise DimensionMismatch(f"dim {A.dim} vs {B.dim}")
    return A.dim - A.intersection_dim(B)


def star(U: Subspace, k: int, cap: int = DEFAULT_ENUM_CAP) -> list[Subspace]:
    """All k-dim subspaces containing U, in canonical order.

    Generated through the quotient V/U (subspaces over U correspond to
    subspaces of the quotient), so the count is the Gaussian binomial
    [n - dim U choose k - dim U]_q without any filtering pass.
    """
    n = U.ambient_dim
    if not U.dim < k <= n:
        raise DimensionMismatch(f"need dim U = {U.dim} < k = {k} <= n = {n}")
    qs = QuotientSpace(n, U)
    lift = qs.lift_matrix()
    field = U.field
    out = []
    for T in enum_grassmannian(field, qs.dim, k - U.dim, cap=cap):
        rows = np.vstack([U.basis, _lift_rows(field, T, lift)])
        out.append(Subspace.span(field, rows, n))
    out.sort()
    return out


def _lift_rows(field: Field, T: Subspace, lift: np.ndarray) -> np.ndarray:
    from .subspace import mat_mul

    if T.dim == 0:
        return np.zeros((0, lift.shape[1]), dtype=np.uint8)
    return mat_mul(field, T.basis, lift)


def duality_map(A: Subspace) -> Subspace:
    """The annihilator, realizing the dual space via the dot pairing."""
    return A.annihilator()


def duality_permutation(g: GrassmannGraph, g_dual: GrassmannGraph) -> np.ndarray:
    """Index map of the annihilator from Gamma_k(V) to Gamma_{n-k}(V*).

    Raises KeyError if some annihilator is missing from the target,
    which cannot happen when g_dual enumerates dimension n - k.
    """
    perm = np.zeros(g.n_vertices, dtype=np.int64)
    for i, v in enumerate(g.vertices):
        perm[i] = g_dual.index_of(duality_map(v))
    return perm
