"""hyperdist: exact correspondence-based distances between high order networks.

A high order network of order K assigns a relationship value in [0, 1]
to every subset of up to K+1 of its nodes.  This package provides the
network type with its dissimilarity/proximity class validators, exact
order-k and p-norm distances minimized over node correspondences (an
exhaustive solver and a branch-and-bound solver), the value-flip
duality between the two classes, a coauthorship-corpus ingestion
pipeline producing proximity networks, and planar embeddings of
distance matrices by stress majorization.
"""

__version__ = "0.1.0"

from ._kernels import active_backend, available_backends, set_backend
from .core import (
    DISSIMILARITY,
    GENERAL,
    PROXIMITY,
    HighOrderNetwork,
    NetworkFormatError,
    ValidationReport,
    Violation,
    load_network,
    random_network,
    rank,
    save_network,
    validate_dissimilarity,
    validate_general,
    validate_network,
    validate_proximity,
)
from .correspondence import (
    Correspondence,
    compose,
    enumerate_correspondences,
    full_correspondence,
    identity_correspondence,
    is_correspondence,
)
from .distances import (
    AUTO,
    BRANCH_AND_BOUND,
    EXHAUSTIVE,
    Bottleneck,
    ClassMismatchError,
    DistanceReport,
    distance_matrix,
    distance_vector,
    order_difference,
    order_difference_vector,
    order_distance,
    pnorm_distance,
    solve_branch_and_bound,
    solve_exhaustive,
)
from .duality import DualityCheck, check_duality_preservation, dualize
from .embedding import Embedding, classical_coordinates, mds_embed, raw_stress
from .ingest import (
    ANCHORED_PROFILE,
    FLAT_PROFILE,
    CorpusFilter,
    CorpusFormatError,
    EmptyCorpusError,
    ParseResult,
    PublicationRecord,
    SynthProfile,
    build_proximity_network,
    filter_records,
    parse_publications,
    save_corpus,
    synth_corpus,
)

__all__ = [
    "__version__",
    "active_backend",
    "available_backends",
    "set_backend",
    "GENERAL",
    "DISSIMILARITY",
    "PROXIMITY",
    "HighOrderNetwork",
    "NetworkFormatError",
    "ValidationReport",
    "Violation",
    "load_network",
    "save_network",
    "random_network",
    "rank",
    "validate_general",
    "validate_dissimilarity",
    "validate_proximity",
    "validate_network",
    "Correspondence",
    "compose",
    "enumerate_correspondences",
    "full_correspondence",
    "identity_correspondence",
    "is_correspondence",
    "AUTO",
    "BRANCH_AND_BOUND",
    "EXHAUSTIVE",
    "Bottleneck",
    "ClassMismatchError",
    "DistanceReport",
    "distance_matrix",
    "distance_vector",
    "order_difference",
    "order_difference_vector",
    "order_distance",
    "pnorm_distance",
    "solve_branch_and_bound",
    "solve_exhaustive",
    "DualityCheck",
    "check_duality_preservation",
    "dualize",
    "Embedding",
    "classical_coordinates",
    "mds_embed",
    "raw_stress",
    "ANCHORED_PROFILE",
    "FLAT_PROFILE",
    "CorpusFilter",
    "CorpusFormatError",
    "EmptyCorpusError",
    "ParseResult",
    "PublicationRecord",
    "SynthProfile",
    "build_proximity_network",
    "filter_records",
    "parse_publications",
    "save_corpus",
    "synth_corpus",
]
