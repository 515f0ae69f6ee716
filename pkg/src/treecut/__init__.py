"""treecut: nearest-descent in-trees, tree-metric embeddings, and
interactive edge-cut clustering."""

from .datasets import (
    Dataset,
    DistanceMatrix,
    dataset_fingerprint,
    distance_matrix,
    generate_gaussian_mixture,
    generate_spiral,
    parse_csv,
)
from .intree import InTree, Potentials, build_in_tree, compute_potentials, default_sigma, potential_rank, reroot, to_undirected
from .mds import Embedding, SmacofResult, classical_mds, embed, normalize_potentials, raw_stress, smacof_mds
from .session import (
    ClusterAssignment,
    ConstraintSet,
    Session,
    ViolationReport,
    assignment_csv,
    create_session,
    cut_longest_edges,
    document_bytes,
    error_rate,
    from_document,
    layout_dict,
    merge_results,
    to_document,
)
from .treedist import WeightedTree, path, tree_distances

__all__ = [
    "Dataset",
    "DistanceMatrix",
    "dataset_fingerprint",
    "distance_matrix",
    "generate_gaussian_mixture",
    "generate_spiral",
    "parse_csv",
    "InTree",
    "Potentials",
    "build_in_tree",
    "compute_potentials",
    "default_sigma",
    "potential_rank",
    "reroot",
    "to_undirected",
    "Embedding",
    "SmacofResult",
    "classical_mds",
    "embed",
    "normalize_potentials",
    "raw_stress",
    "smacof_mds",
    "ClusterAssignment",
    "ConstraintSet",
    "Session",
    "ViolationReport",
    "assignment_csv",
    "create_session",
    "cut_longest_edges",
    "document_bytes",
    "error_rate",
    "from_document",
    "layout_dict",
    "merge_results",
    "to_document",
    "WeightedTree",
    "path",
    "tree_distances",
]
