"""multred: reduce multi-labeled phylogenetic trees to their maximally
reduced form, the smallest tree carrying the same conflict-free quartets."""

from .newick import (
    NewickDocument,
    NewickSyntaxError,
    ParseIssue,
    parse_collection,
    parse_newick,
    write_newick,
)
from .oracle import (
    information_content,
    is_contractible_oracle,
    is_maximally_reduced_oracle,
    is_prunable_oracle,
    relabeled_single_tree,
)
from .pipeline import (
    Classification,
    EdgeLossMetrics,
    PipelineOutcome,
    classify_and_measure,
    edge_loss_metrics,
    run_pipeline,
    to_singly_labeled,
)
from .reduce import (
    DominanceOrdering,
    ReductionReport,
    compare_adjacent,
    contract_dominated_paths,
    dedup_pendant_leaves,
    preprocess,
    prune_nonparticipating_labels,
    prune_spanning_redundant,
    reduce_to_mrf,
)
from .tree import (
    CountTable,
    EdgePartition,
    MulTree,
    canonical_form,
    distinct_label_counts,
    edge_label_partition,
    has_quartet_information,
    is_isomorphic,
)

__version__ = "0.1.0"

__all__ = [
    "Classification",
    "CountTable",
    "DominanceOrdering",
    "EdgeLossMetrics",
    "EdgePartition",
    "MulTree",
    "NewickDocument",
    "NewickSyntaxError",
    "ParseIssue",
    "PipelineOutcome",
    "ReductionReport",
    "canonical_form",
    "classify_and_measure",
    "compare_adjacent",
    "contract_dominated_paths",
    "dedup_pendant_leaves",
    "distinct_label_counts",
    "edge_label_partition",
    "edge_loss_metrics",
    "has_quartet_information",
    "information_content",
    "is_contractible_oracle",
    "is_isomorphic",
    "is_maximally_reduced_oracle",
    "is_prunable_oracle",
    "parse_collection",
    "parse_newick",
    "preprocess",
    "prune_nonparticipating_labels",
    "prune_spanning_redundant",
    "reduce_to_mrf",
    "relabeled_single_tree",
    "run_pipeline",
    "to_singly_labeled",
    "write_newick",
]
