"""Finite higher-rank graphs, k-morphs and the constructions built from them."""

from .errors import (CubeFailure, KMorphError, MissingSquare, NonBijectiveSquare,
                     ValidationError)
from .kgraph import (GraphIso, KGraph, Path, boundary_paths, compose, factorize,
                     find_isomorphism, is_locally_convex, paths_of_degree, restrict_colors,
                     validate_rules)
from .morph import (Covering, KMorph, covering_morph, fibred_product,
                    find_morph_isomorphism, identity_morph, transport, transport_inverse,
                    validate_covering, validate_morph)
from .skeleton import Edge, Skeleton, adjacency_matrix, check_wellformed, has_no_sources

__all__ = [
    "CubeFailure", "Covering", "Edge", "GraphIso", "KGraph", "KMorph", "KMorphError",
    "MissingSquare", "NonBijectiveSquare", "Path", "Skeleton", "ValidationError",
    "adjacency_matrix", "boundary_paths", "check_wellformed", "compose", "covering_morph",
    "factorize", "fibred_product", "find_isomorphism", "find_morph_isomorphism",
    "has_no_sources", "identity_morph", "is_locally_convex", "paths_of_degree",
    "restrict_colors", "transport", "transport_inverse", "validate_covering",
    "validate_morph", "validate_rules",
]
