"""The quadratic-time reduction engine.

Reduction runs in phases, in a fixed order: contract internal edges that
resolve nothing, contract edges whose quartets are covered by a neighboring
edge (deleting side subtrees when the two edges carry equal information),
then prune redundant leaves in three stages.  A full phase sequence is
re-run until a pass makes no change; under the theory a second pass is a
no-op, so the loop is a cheap safety net with a hard cap.

Count bookkeeping rests on two facts that the test suite cross-checks
against the brute-force oracle: contracting an edge leaves every other
edge's label partition unchanged, and the subtree deletions performed in
the equal-information case only remove labels that remain present on both
sides of every surviving edge.  Counts therefore stay valid through the
whole contraction phase and are recomputed before the pruning stages.
"""

from __future__ import annotations

import warnings
from bisect import bisect_right
from collections import deque
from dataclasses import dataclass
from enum import Enum

from .tree import CountTable, MulTree, distinct_label_counts

MAX_REDUCTION_PASSES = 10


class DominanceOrdering(Enum):
    """Comparison of the quartet sets of two adjacent informative edges."""

    LEFT_SUBSUMED = "left_subsumed"
    RIGHT_SUBSUMED = "right_subsumed"
    EQUAL = "equal"
    INCOMPARABLE = "incomparable"


@dataclass
class ReductionReport:
    """What one reduction run did, for machine-readable reporting."""

    input_leaves: int = 0
    input_labels: int = 0
    contractions_uninformative: int = 0
    contractions_dominated: int = 0
    subtrees_deleted: int = 0
    leaves_pruned_nonparticipating: int = 0
    leaves_pruned_pendant_dup: int = 0
    leaves_pruned_spanning: int = 0
    output_leaves: int = 0
    output_labels: int = 0
    no_information: bool = False
    taxon_loss_step1_pct: float = 0.0


# ----------------------------------------------------------------------
# phase 1: preprocessing


def _merge(tree: MulTree, counts: CountTable, u: int, v: int) -> tuple[int, int]:
    """Contract edge (u, v) keeping the higher-degree endpoint; re-key counts."""
    keep = max((u, v), key=lambda x: (tree.degree(x), -x))
    lose = v if keep == u else u
    counts.drop_edge(keep, lose)
    moved = [x for x in tree.neighbors(lose) if x != keep]
    tree.contract_edge(keep, lose, survivor=keep)
    for x in moved:
        counts.rekey_edge((lose, x), (keep, x))
    return keep, lose


def preprocess(
    tree: MulTree, report: ReductionReport | None = None
) -> tuple[MulTree, CountTable]:
    """Compute the count table and contract uninformative internal edges.

    An edge is uninformative when either exclusive side holds at most one
    label.  Contractions preserve the partitions of all other edges, so the
    whole batch stays valid and is collapsed in one union-find sweep with a
    single adjacency rebuild; the counts stay valid for every survivor.
    """
    counts = distinct_label_counts(tree)
    doomed = [
        (u, v)
        for u, v in counts.edges()
        if not tree.is_leaf(u)
        and not tree.is_leaf(v)
        and (counts.exclusive_count(u, v) <= 1 or counts.exclusive_count(v, u) <= 1)
    ]
    if not doomed:
        return tree, counts

    parent: dict[int, int] = {}

    def find(x: int) -> int:
        root = x
        while root in parent:
            root = parent[root]
        while x != root:
            nxt = parent[x]
            parent[x] = root
            x = nxt
        return root

    for u, v in doomed:
        ru, rv = find(u), find(v)
        if ru != rv:  # always true in a tree; edges never form a cycle
            parent[max(ru, rv)] = min(ru, rv)
    if report is not None:
        report.contractions_uninformative += len(doomed)

    roots = {x: find(x) for x in tree.nodes()}
    movers = sorted(x for x, r in roots.items() if r != x)
    for x in movers:
        s = roots[x]
        for y in list(tree.neighbors(x)):
            tree.remove_edge(x, y)
            ry = roots[y]
            if ry != s:
                tree.add_edge(s, ry)
        tree.remove_node(x)
    counts.side_distinct = {
        (roots[a], roots[b]): val
        for (a, b), val in counts.side_distinct.items()
        if roots[a] != roots[b]
    }
    return tree, counts


# ----------------------------------------------------------------------
# phase 2: dominated-edge contraction


def compare_adjacent(
    counts: CountTable, e1: tuple[int, int], e2: tuple[int, int]
) -> DominanceOrdering:
    """Constant-time comparison of the quartet sets of two adjacent edges.

    With the shared node v and the edges oriented u-v-w, the quartets of
    (u,v) are a subset of those of (v,w) exactly when the sides pointing
    away from w carry the same number of distinct labels (those label sets
    are nested, so equal cardinality means equal sets, which pins the far
    exclusive sides to each other).  Intended for informative edges; for an
    edge resolving no quartet the count test is vacuous.
    """
    shared = set(e1) & set(e2)
    if len(shared) != 1:
        raise ValueError(f"edges {e1} and {e2} are not adjacent")
    (v,) = shared
    u = e1[0] if e1[1] == v else e1[1]
    w = e2[0] if e2[1] == v else e2[1]
    sd = counts.side_distinct
    fwd = sd[(u, v)] == sd[(v, w)]
    bwd = sd[(w, v)] == sd[(v, u)]
    if fwd and bwd:
        return DominanceOrdering.EQUAL
    if fwd:
        return DominanceOrdering.LEFT_SUBSUMED
    if bwd:
        return DominanceOrdering.RIGHT_SUBSUMED
    return DominanceOrdering.INCOMPARABLE


def _delete_branch(tree: MulTree, counts: CountTable, anchor: int, first: int) -> None:
    """Delete the whole subtree hanging off `anchor` through node `first`."""
    seen = {anchor, first}
    order = [first]
    stack = [first]
    while stack:
        x = stack.pop()
        for w in tree.neighbors(x):
            if w not in seen:
                seen.add(w)
                order.append(w)
                stack.append(w)
    counts.drop_edge(anchor, first)
    for x in order:
        for w in tree._adj[x]:
            counts.drop_edge(x, w)
        tree.remove_node(x)


def contract_dominated_paths(
    tree: MulTree, counts: CountTable, report: ReductionReport | None = None
) -> MulTree:
    """Contract every edge whose quartets a neighboring edge already covers.

    Candidate nodes are exactly the internal nodes with two internal edges:
    once the uninformative edges are gone, a node between comparable edges
    cannot carry a third internal edge (any branch there would resolve
    nothing).  When the two edges carry equal information the branches
    hanging between them are deleted outright before the contraction.
    """
    int_deg = {
        v: sum(1 for w in tree.neighbors(v) if not tree.is_leaf(w))
        for v in tree.internal_nodes()
    }
    pending = deque(sorted(v for v, d in int_deg.items() if d == 2))
    while pending:
        v = pending.popleft()
        if not tree.has_node(v) or tree.is_leaf(v) or int_deg.get(v) != 2:
            continue
        ins = sorted(x for x in tree.neighbors(v) if not tree.is_leaf(x))
        if len(ins) != 2:
            int_deg[v] = len(ins)
            continue
        u, w = ins
        sd = counts.side_distinct
        fwd = sd[(u, v)] == sd[(v, w)]  # quartets of (u,v) within those of (v,w)
        bwd = sd[(w, v)] == sd[(v, u)]
        if not (fwd or bwd):
            continue
        if fwd and bwd:
            for x in [x for x in tree.neighbors(v) if x != u and x != w]:
                _delete_branch(tree, counts, v, x)
                int_deg.pop(x, None)
                if report is not None:
                    report.subtrees_deleted += 1
            target = u  # equal information: either edge goes; take the first
        elif fwd:
            target = u
        else:
            target = w
        keep, lose = _merge(tree, counts, v, target)
        int_deg[keep] = int_deg[keep] + int_deg.pop(lose) - 2
        if report is not None:
            report.contractions_dominated += 1
        if int_deg.get(keep) == 2:
            pending.append(keep)
    return tree


# ----------------------------------------------------------------------
# phase 3: leaf pruning


def prune_nonparticipating_labels(
    tree: MulTree,
    counts: CountTable | None = None,
    report: ReductionReport | None = None,
) -> MulTree:
    """Prune leaves whose labels sit in no resolved quartet.

    Once the contraction phases are done, a single-copy label always pairs
    into a quartet across any informative edge, and a multi-copy label
    outside all quartets straddles every informative edge, so removing any
    one of its leaves would create quartets.  Label-wide pruning is
    therefore information-preserving only when the tree resolves no quartet
    at all, in which case every leaf goes.
    """
    if tree.n_nodes == 0:
        return tree
    if counts is None:
        counts = distinct_label_counts(tree)
    if counts.has_informative_edge():
        return tree
    if report is not None:
        report.leaves_pruned_nonparticipating += tree.n_leaves
    tree.clear()
    return tree


def dedup_pendant_leaves(tree: MulTree, report: ReductionReport | None = None) -> MulTree:
    """At every pendant node keep one leaf per label, dropping duplicates."""
    for p in sorted(tree.internal_nodes()):
        if not tree.has_node(p):
            continue
        seen: set[str] = set()
        extras: list[int] = []
        for x in tree.neighbors(p):
            if tree.is_leaf(x):
                lab = tree.label_of(x)
                if lab in seen:
                    extras.append(x)
                else:
                    seen.add(lab)
        for x in extras:
            tree.remove_node(x)
        if extras:
            if report is not None:
                report.leaves_pruned_pendant_dup += len(extras)
            tree._tidy(p)
    return tree


def _euler_index(tree: MulTree, root: int):
    """Entry/exit times, parents, and per-node child lists in entry order."""
    tin: dict[int, int] = {}
    tout: dict[int, int] = {}
    parent: dict[int, int | None] = {root: None}
    children: dict[int, list[int]] = {}
    clock = 0
    stack: list[tuple[int, bool]] = [(root, False)]
    while stack:
        v, done = stack.pop()
        if done:
            tout[v] = clock
            continue
        tin[v] = clock
        clock += 1
        stack.append((v, True))
        kids = [w for w in tree.neighbors(v) if w != parent[v]]
        children[v] = kids
        for w in reversed(kids):
            parent[w] = v
        stack.extend((w, False) for w in reversed(kids))
    # Reversal above keeps child visit order equal to adjacency order, so
    # each child list is already sorted by entry time.
    return tin, tout, parent, children


def prune_spanning_redundant(tree: MulTree, report: ReductionReport | None = None) -> MulTree:
    """Prune multi-copy leaves hanging where their label's span branches.

    For each label with several leaves, consider the minimal subtree
    spanning them.  A leaf whose pendant node has degree at least three in
    that subtree is redundant: every other edge keeps a copy of the label
    on the same side, so removing the leaf changes no partition.
    """
    mult = tree.label_multiplicities()
    multi = sorted(lab for lab, k in mult.items() if k >= 2)
    if not multi:
        return tree
    internals = sorted(tree.internal_nodes())
    if not internals:
        return tree
    root = internals[0]
    tin, tout, parent, children = _euler_index(tree, root)
    child_tins: dict[int, list[int]] = {}

    by_label: dict[str, list[int]] = {lab: [] for lab in multi}
    for leaf in tree.leaves():
        lab = tree.label_of(leaf)
        if lab in by_label:
            by_label[lab].append(leaf)

    doomed: list[int] = []
    for lab in multi:
        leaves = sorted(by_label[lab], key=tin.__getitem__)
        pendants: dict[int, list[int]] = {}
        for leaf in leaves:
            pendants.setdefault(parent[leaf], []).append(leaf)  # type: ignore[arg-type]
        for p, own in sorted(pendants.items()):
            directions: set[object] = set()
            lo, hi = tin[p], tout[p]
            for leaf in leaves:
                t = tin[leaf]
                if not (lo <= t < hi):
                    directions.add("up")
                    continue
                tins = child_tins.get(p)
                if tins is None:
                    tins = [tin[c] for c in children[p]]
                    child_tins[p] = tins
                directions.add(children[p][bisect_right(tins, t) - 1])
            spare = len(directions) - len(own)  # directions not through p's own leaves
            keep = len(own)
            while keep > 0 and spare + keep >= 3:
                keep -= 1
            doomed.extend(own[keep:])
    for leaf in doomed:
        tree.prune_leaf(leaf)
    if report is not None:
        report.leaves_pruned_spanning += len(doomed)
    return tree


# ----------------------------------------------------------------------
# the full pipeline


def reduce_to_mrf(tree: MulTree) -> tuple[MulTree, ReductionReport]:
    """Reduce to the unique smallest tree with the same quartet information.

    The input is not modified.  Trees carrying no quartet information reduce
    to the canonical empty tree, flagged on the report.
    """
    work = tree.copy()
    work.edge_lengths = None
    report = ReductionReport(
        input_leaves=work.n_leaves,
        input_labels=len(work.labels()),
    )
    for _ in range(MAX_REDUCTION_PASSES):
        if work.n_nodes == 0:
            break
        size_before = work.n_nodes
        work, counts = preprocess(work, report)
        work = contract_dominated_paths(work, counts, report)
        counts = distinct_label_counts(work)
        work = prune_nonparticipating_labels(work, counts, report)
        work = dedup_pendant_leaves(work, report)
        work = prune_spanning_redundant(work, report)
        if work.n_nodes == size_before:
            break
    else:
        warnings.warn(
            f"reduction did not reach a fixed point within {MAX_REDUCTION_PASSES} passes",
            RuntimeWarning,
            stacklevel=2,
        )
    report.no_information = work.n_leaves == 0
    report.output_leaves = work.n_leaves
    report.output_labels = len(work.labels())
    if report.input_labels:
        lost = report.input_labels - report.output_labels
        report.taxon_loss_step1_pct = 100.0 * lost / report.input_labels
    return work, report
