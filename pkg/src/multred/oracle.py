"""Brute-force quartet machinery, used as ground truth on small trees.

Everything here materializes quartet sets explicitly, so it is meant for
verification rather than production reduction.  A size guard refuses trees
with more than `MAX_ORACLE_LEAVES` leaves unless forced.
"""

from __future__ import annotations

from itertools import combinations

from .tree import MulTree, edge_label_partition

MAX_ORACLE_LEAVES = 16

# A quartet ab|cd is a pair of disjoint label pairs; canonical form sorts
# within each pair and puts the lexicographically smaller pair first, so set
# equality is syntactic.
Quartet = tuple[tuple[str, str], tuple[str, str]]


class OracleSizeError(ValueError):
    pass


def _check_size(tree: MulTree, force: bool) -> None:
    if not force and tree.n_leaves > MAX_ORACLE_LEAVES:
        raise OracleSizeError(
            f"tree has {tree.n_leaves} leaves; oracle refuses more than "
            f"{MAX_ORACLE_LEAVES} unless force=True"
        )


def make_quartet(a: str, b: str, c: str, d: str) -> Quartet:
    """Canonical quartet ab|cd (a,b on one side; c,d on the other)."""
    p1 = (a, b) if a <= b else (b, a)
    p2 = (c, d) if c <= d else (d, c)
    return (p1, p2) if p1 <= p2 else (p2, p1)


def edge_quartets(tree: MulTree, edge: tuple[int, int], *, force: bool = False) -> set[Quartet]:
    """All quartets resolved by `edge`: one pair from each exclusive side."""
    _check_size(tree, force)
    part = edge_label_partition(tree, edge)
    if len(part.m_u) < 2 or len(part.m_v) < 2:
        return set()
    left = list(combinations(sorted(part.m_u), 2))
    right = list(combinations(sorted(part.m_v), 2))
    out: set[Quartet] = set()
    for p1 in left:
        for p2 in right:
            out.add((p1, p2) if p1 <= p2 else (p2, p1))
    return out


def information_content(tree: MulTree, *, force: bool = False) -> set[Quartet]:
    """Union of the quartets resolved by every edge of the tree."""
    _check_size(tree, force)
    out: set[Quartet] = set()
    for edge in tree.edges():
        out |= edge_quartets(tree, edge, force=force)
    return out


def restrict_to_labels(quartets: set[Quartet], labels: set[str]) -> set[Quartet]:
    """Keep only quartets whose four labels all belong to `labels`."""
    return {
        q for q in quartets
        if q[0][0] in labels and q[0][1] in labels and q[1][0] in labels and q[1][1] in labels
    }


def conflicting_topologies(quartets: set[Quartet]) -> list[tuple[Quartet, Quartet]]:
    """Pairs of quartets giving different topologies on the same 4-label set."""
    by_support: dict[tuple[str, ...], Quartet] = {}
    clashes = []
    for q in sorted(quartets):
        key = tuple(sorted(q[0] + q[1]))
        if key in by_support and by_support[key] != q:
            clashes.append((by_support[key], q))
        else:
            by_support[key] = q
    return clashes


def relabeled_single_tree(tree: MulTree) -> MulTree:
    """Singly-labeled copy: one leaf keeps each label, the rest get fresh ones.

    Fresh names are ``label#k`` with k chosen so they avoid the label set.
    """
    out = tree.copy()
    used = out.labels()
    seen: set[str] = set()
    for leaf in sorted(out._leaf_label):
        lab = out._leaf_label[leaf]
        if lab in seen:
            k = 1
            while f"{lab}#{k}" in used:
                k += 1
            fresh = f"{lab}#{k}"
            used.add(fresh)
            out._leaf_label[leaf] = fresh
        else:
            seen.add(lab)
    return out


def is_prunable_oracle(tree: MulTree, leaf: int, *, force: bool = False) -> bool:
    """True iff pruning `leaf` leaves the information content unchanged."""
    base = information_content(tree, force=force)
    trial = tree.copy()
    trial.prune_leaf(leaf)
    return information_content(trial, force=force) == base


def is_contractible_oracle(tree: MulTree, edge: tuple[int, int], *, force: bool = False) -> bool:
    """True iff contracting internal `edge` leaves the information unchanged."""
    base = information_content(tree, force=force)
    trial = tree.copy()
    trial.contract_edge(*edge)
    return information_content(trial, force=force) == base


def is_maximally_reduced_oracle(tree: MulTree, *, force: bool = False) -> bool:
    """No leaf is prunable and no internal edge is contractible."""
    base = information_content(tree, force=force)
    for leaf in sorted(tree.leaves()):
        trial = tree.copy()
        trial.prune_leaf(leaf)
        if information_content(trial, force=force) == base:
            return False
    for edge in sorted(tree.internal_edges()):
        trial = tree.copy()
        trial.contract_edge(*edge)
        if information_content(trial, force=force) == base:
            return False
    return True


def resolves_unique_quartet(tree: MulTree, edge: tuple[int, int], *, force: bool = False) -> bool:
    """True iff `edge` resolves at least one quartet no other edge resolves."""
    own = edge_quartets(tree, edge, force=force)
    if not own:
        return False
    others: set[Quartet] = set()
    for other in tree.edges():
        if other != edge and other != (edge[1], edge[0]):
            others |= edge_quartets(tree, other, force=force)
    return bool(own - others)


def mrf_invariants_hold(original: MulTree, reduced: MulTree, *, force: bool = False) -> bool:
    """Convenience conjunction used by verification: equal information and
    maximal reduction of the reduced tree."""
    if information_content(original, force=force) != information_content(reduced, force=force):
        return False
    return is_maximally_reduced_oracle(reduced, force=force)


__all__ = [
    "MAX_ORACLE_LEAVES",
    "Quartet",
    "OracleSizeError",
    "make_quartet",
    "edge_quartets",
    "information_content",
    "restrict_to_labels",
    "conflicting_topologies",
    "relabeled_single_tree",
    "is_prunable_oracle",
    "is_contractible_oracle",
    "is_maximally_reduced_oracle",
    "resolves_unique_quartet",
    "mrf_invariants_hold",
]
