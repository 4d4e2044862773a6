"""Second reduction step and per-tree bookkeeping.

After a tree is reduced, a possibly multi-labeled result can be restricted
to its once-occurring labels, yielding a singly-labeled tree at the cost of
some quartet information.  Classification separates trees whose reduced
form is already singly-labeled from those needing the second step and from
trees that lose all resolution.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .reduce import ReductionReport, preprocess, reduce_to_mrf
from .tree import MulTree, has_quartet_information


class Classification(Enum):
    NO_INFORMATION = "NoInformation"
    SINGLY_MRF = "SinglyMRF"
    SECOND_STEP_SINGLY = "SecondStepSingly"


@dataclass
class PipelineOutcome:
    """Classification and loss metrics for one tree through both steps."""

    classification: Classification
    mrf: MulTree
    singly: MulTree | None
    taxon_loss_step1_pct: float
    taxon_loss_total_pct: float
    naive_loss_pct: float
    node_count_input: int
    node_count_singly: int


@dataclass(frozen=True)
class EdgeLossMetrics:
    """Node-count comparison of the singly-labeled result against the
    roughly-twice-the-taxa size of a fully resolved tree on the same taxa."""

    node_count_input: int
    node_count_singly: int
    reference_node_count: int
    resolution_ratio: float


def to_singly_labeled(mrf: MulTree) -> MulTree:
    """Restrict to once-occurring labels; may come out degenerate.

    Every leaf of a multi-copy label is deleted, degree-2 nodes are spliced
    out, and internal edges rendered uninformative by the removals are
    contracted so the result is normalized.
    """
    out = mrf.copy()
    mult = out.label_multiplicities()
    doomed = sorted(leaf for leaf in out.leaves() if mult[out.label_of(leaf)] >= 2)
    for leaf in doomed:
        out.prune_leaf(leaf)
    if out.n_edges:
        preprocess(out)
    return out


def classify_and_measure(
    input_tree: MulTree, mrf: MulTree, report: ReductionReport
) -> PipelineOutcome:
    """Classify one reduced tree and fill in the loss accounting."""
    input_labels = len(input_tree.labels())
    mult = input_tree.label_multiplicities()
    mul_taxa = sum(1 for k in mult.values() if k >= 2)
    naive = 100.0 * mul_taxa / input_labels if input_labels else 0.0

    if mrf.n_leaves == 0:
        classification, singly = Classification.NO_INFORMATION, None
    elif mrf.is_singly_labeled():
        classification, singly = Classification.SINGLY_MRF, mrf
    else:
        candidate = to_singly_labeled(mrf)
        if candidate.n_leaves and has_quartet_information(candidate):
            classification, singly = Classification.SECOND_STEP_SINGLY, candidate
        else:
            classification, singly = Classification.NO_INFORMATION, None

    surviving = len(singly.labels()) if singly is not None else 0
    total = 100.0 * (input_labels - surviving) / input_labels if input_labels else 0.0
    return PipelineOutcome(
        classification=classification,
        mrf=mrf,
        singly=singly,
        taxon_loss_step1_pct=report.taxon_loss_step1_pct,
        taxon_loss_total_pct=total,
        naive_loss_pct=naive,
        node_count_input=input_tree.n_nodes,
        node_count_singly=singly.n_nodes if singly is not None else 0,
    )


def edge_loss_metrics(input_tree: MulTree, singly: MulTree | None) -> EdgeLossMetrics | None:
    """Resolution comparison for a non-degenerate singly-labeled result."""
    if singly is None or singly.n_leaves == 0 or not has_quartet_information(singly):
        return None
    reference = 2 * len(singly.labels())
    return EdgeLossMetrics(
        node_count_input=input_tree.n_nodes,
        node_count_singly=singly.n_nodes,
        reference_node_count=reference,
        resolution_ratio=singly.n_nodes / reference,
    )


def run_pipeline(tree: MulTree) -> tuple[MulTree, ReductionReport, PipelineOutcome]:
    """Reduce, classify, and measure one tree."""
    mrf, report = reduce_to_mrf(tree)
    outcome = classify_and_measure(tree, mrf, report)
    return mrf, report, outcome
