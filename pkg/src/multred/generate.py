"""Seeded random MUL-tree generation and information-preserving editing.

Trees are grown as a random singly-labeled topology first; extra leaves for
duplicated labels are then grafted at random spots, mimicking multiplicity
without modeling its biological source.  All randomness flows through a
caller-supplied ``random.Random`` so corpora are reproducible.
"""

from __future__ import annotations

from random import Random

from .oracle import information_content
from .tree import MulTree


def _attach_leaf(tree: MulTree, label: str, edges: list[tuple[int, int]],
                 internals: list[int], rng: Random, multifurcation_p: float) -> None:
    if internals and rng.random() < multifurcation_p:
        hub = rng.choice(internals)
        leaf = tree.new_leaf(label, attach_to=hub)
        edges.append((hub, leaf))
        return
    u, v = edges[rng.randrange(len(edges))]
    mid = tree.new_node()
    tree.remove_edge(u, v)
    tree.add_edge(u, mid)
    tree.add_edge(mid, v)
    leaf = tree.new_leaf(label, attach_to=mid)
    edges.remove((u, v))
    edges.extend([(u, mid), (mid, v), (mid, leaf)])
    internals.append(mid)


def _grow(labels: list[str], rng: Random, multifurcation_p: float) -> MulTree:
    tree = MulTree()
    if not labels:
        return tree
    if len(labels) == 1:
        tree.new_leaf(labels[0])
        return tree
    if len(labels) == 2:
        a = tree.new_leaf(labels[0])
        tree.new_leaf(labels[1], attach_to=a)
        return tree
    hub = tree.new_node()
    edges = [(hub, tree.new_leaf(lab, attach_to=hub)) for lab in labels[:3]]
    internals = [hub]
    for lab in labels[3:]:
        _attach_leaf(tree, lab, edges, internals, rng, multifurcation_p)
    return tree


def random_mul_tree(
    rng: Random,
    n_leaves: int,
    max_multiplicity: int = 3,
    multifurcation_p: float = 0.2,
) -> MulTree:
    """Random MUL-tree with `n_leaves` leaves and bounded label multiplicity."""
    if n_leaves < 1:
        raise ValueError("need at least one leaf")
    counts: list[int] = []
    remaining = n_leaves
    while remaining:
        if remaining == 1 or max_multiplicity == 1 or rng.random() < 0.6:
            k = 1
        else:
            k = rng.randint(2, min(max_multiplicity, remaining))
        counts.append(k)
        remaining -= k
    labels = [f"t{i + 1}" for i in range(len(counts))]
    tree = _grow(labels, rng, multifurcation_p)
    edges = [tuple(sorted(e)) for e in tree.edges()]
    internals = sorted(tree.internal_nodes())
    for lab, k in zip(labels, counts):
        for _ in range(k - 1):
            if not edges:  # degenerate 1-2 leaf topologies: attach at a leaf
                anchor = next(iter(tree.leaves()))
                leaf = tree.new_leaf(lab, attach_to=anchor)
                edges.append((anchor, leaf))
                continue
            _attach_leaf(tree, lab, edges, internals, rng, multifurcation_p)
    tree.normalize()
    return tree


def random_singly_tree(rng: Random, n_leaves: int, multifurcation_p: float = 0.2) -> MulTree:
    """Random singly-labeled tree on `n_leaves` distinct labels."""
    return random_mul_tree(rng, n_leaves, max_multiplicity=1,
                           multifurcation_p=multifurcation_p)


def random_fixed_multiplicity_tree(rng: Random, n_leaves: int, multiplicity: int) -> MulTree:
    """Every label occurs exactly `multiplicity` times (n_leaves rounded down)."""
    n_labels = max(2, n_leaves // multiplicity)
    labels = [f"t{i + 1}" for i in range(n_labels)]
    tree = _grow(labels, rng, multifurcation_p=0.15)
    edges = [tuple(sorted(e)) for e in tree.edges()]
    internals = sorted(tree.internal_nodes())
    for lab in labels:
        for _ in range(multiplicity - 1):
            _attach_leaf(tree, lab, edges, internals, rng, 0.15)
    tree.normalize()
    return tree


def random_information_preserving_edits(
    tree: MulTree, rng: Random, max_edits: int, *, force: bool = False
) -> MulTree:
    """Apply up to `max_edits` oracle-verified prunings/contractions.

    Each candidate edit is accepted only when the brute-force information
    content is unchanged, so the result always shares the input's quartets.
    """
    current = tree.copy()
    base = information_content(current, force=force)
    applied = 0
    while applied < max_edits:
        candidates: list[tuple[str, object]] = [("leaf", x) for x in sorted(current.leaves())]
        candidates += [("edge", e) for e in sorted(current.internal_edges())]
        rng.shuffle(candidates)
        hit = False
        for kind, target in candidates:
            trial = current.copy()
            if kind == "leaf":
                trial.prune_leaf(target)  # type: ignore[arg-type]
            else:
                trial.contract_edge(*target)  # type: ignore[misc]
            if information_content(trial, force=force) == base:
                current = trial
                applied += 1
                hit = True
                break
        if not hit:
            break
    return current
