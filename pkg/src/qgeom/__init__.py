"""qgeom: exact finite geometry over small finite fields.

Grassmann graphs, polar spaces and dual polar graphs, and isometric
embeddings of the latter into the former, all with exact GF(q)
arithmetic and independent cross-checks at every layer.
"""

from .gf import Field, build_field
from .subspace import QuotientSpace, Subspace, quotient
from .grassmann import (
    FiniteGraph,
    GrassmannGraph,
    duality_map,
    enum_grassmannian,
    gaussian_binomial,
    grassmann_distance,
    intersection_numbers,
    star,
)
from .polar import (
    Form,
    PolarSpace,
    build_form,
    build_polar_space,
    dual_polar_graph,
    is_totally_singular,
    point_star,
    radical,
)
from .embed import (
    Embedding,
    EquivalenceWitness,
    SearchResult,
    StructureReport,
    analyze_embedding,
    canonical_embedding,
    check_line_images,
    classify_embeddings,
    connecting_automorphism,
    embedding_from_json_obj,
    extract_star_subspace,
    find_star_subspaces,
    induce_point_map,
    polar_span,
    reduce_to_quotient,
    search_embeddings,
    verify_isometric,
    witness_kind,
)

__version__ = "0.1.0"

__all__ = [
    "Field",
    "build_field",
    "Subspace",
    "QuotientSpace",
    "quotient",
    "FiniteGraph",
    "GrassmannGraph",
    "duality_map",
    "enum_grassmannian",
    "gaussian_binomial",
    "grassmann_distance",
    "intersection_numbers",
    "star",
    "Form",
    "PolarSpace",
    "build_form",
    "build_polar_space",
    "dual_polar_graph",
    "is_totally_singular",
    "point_star",
    "radical",
    "Embedding",
    "EquivalenceWitness",
    "SearchResult",
    "StructureReport",
    "analyze_embedding",
    "canonical_embedding",
    "check_line_images",
    "classify_embeddings",
    "connecting_automorphism",
    "embedding_from_json_obj",
    "extract_star_subspace",
    "find_star_subspaces",
    "induce_point_map",
    "polar_span",
    "reduce_to_quotient",
    "search_embeddings",
    "verify_isometric",
    "witness_kind",
]
