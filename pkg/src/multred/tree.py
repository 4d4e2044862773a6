"""Unrooted multi-labeled tree model and structural primitives.

A MUL-tree is an unrooted tree whose leaves carry string labels, where the
same label may appear on several leaves.  All higher-level machinery (Newick
I/O, the quartet oracle, the reduction engine) is built on the `MulTree`
class and the per-edge label bookkeeping defined here.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterator

_QUOTE_TRIGGERS = set("()[]{},;:'\" \t\r\n")


def escape_label(label: str) -> str:
    """Quote a label for Newick/canonical output when it needs it."""
    if label and not any(ch in _QUOTE_TRIGGERS for ch in label):
        return label
    return "'" + label.replace("'", "''") + "'"


class MulTree:
    """Unrooted tree with integer node ids and string-labeled leaves.

    Internal (non-leaf) nodes have degree >= 3 once normalized, except in
    degenerate trees with at most two leaves.  Mutating operations edit the
    tree in place; use :meth:`copy` to keep the original.  Node ids are
    stable across edits within a run; serialization renumbers canonically.
    """

    __slots__ = ("_adj", "_leaf_label", "_next_id", "edge_lengths")

    def __init__(self) -> None:
        self._adj: dict[int, dict[int, None]] = {}
        self._leaf_label: dict[int, str] = {}
        self._next_id = 0
        # Branch lengths echoed by the parser on request; purely topological
        # operations other than degree-2 suppression do not maintain them.
        self.edge_lengths: dict[frozenset[int], float] | None = None

    # ------------------------------------------------------------------
    # construction

    def new_node(self) -> int:
        nid = self._next_id
        self._next_id += 1
        self._adj[nid] = {}
        return nid

    def new_leaf(self, label: str, attach_to: int | None = None) -> int:
        nid = self.new_node()
        self._leaf_label[nid] = label
        if attach_to is not None:
            self.add_edge(nid, attach_to)
        return nid

    def add_edge(self, u: int, v: int) -> None:
        self._adj[u][v] = None
        self._adj[v][u] = None

    def remove_edge(self, u: int, v: int) -> None:
        del self._adj[u][v]
        del self._adj[v][u]

    def remove_node(self, v: int) -> None:
        for w in list(self._adj[v]):
            del self._adj[w][v]
        del self._adj[v]
        self._leaf_label.pop(v, None)

    def clear(self) -> None:
        self._adj.clear()
        self._leaf_label.clear()

    # ------------------------------------------------------------------
    # queries

    @property
    def n_nodes(self) -> int:
        return len(self._adj)

    @property
    def n_leaves(self) -> int:
        return len(self._leaf_label)

    @property
    def n_edges(self) -> int:
        return sum(len(nbrs) for nbrs in self._adj.values()) // 2

    def nodes(self) -> Iterator[int]:
        return iter(self._adj)

    def has_node(self, v: int) -> bool:
        return v in self._adj

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._adj.get(u, ())

    def is_leaf(self, v: int) -> bool:
        return v in self._leaf_label

    def label_of(self, leaf: int) -> str:
        return self._leaf_label[leaf]

    def leaves(self) -> Iterator[int]:
        return iter(self._leaf_label)

    def internal_nodes(self) -> Iterator[int]:
        return (v for v in self._adj if v not in self._leaf_label)

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def neighbors(self, v: int) -> Iterator[int]:
        return iter(self._adj[v])

    def edges(self) -> Iterator[tuple[int, int]]:
        for u, nbrs in self._adj.items():
            for v in nbrs:
                if u < v:
                    yield (u, v)

    def internal_edges(self) -> Iterator[tuple[int, int]]:
        lab = self._leaf_label
        for u, v in self.edges():
            if u not in lab and v not in lab:
                yield (u, v)

    def labels(self) -> set[str]:
        return set(self._leaf_label.values())

    def label_multiplicities(self) -> Counter[str]:
        return Counter(self._leaf_label.values())

    def is_singly_labeled(self) -> bool:
        return len(set(self._leaf_label.values())) == len(self._leaf_label)

    def copy(self) -> MulTree:
        dup = MulTree.__new__(MulTree)
        dup._adj = {v: dict(nbrs) for v, nbrs in self._adj.items()}
        dup._leaf_label = dict(self._leaf_label)
        dup._next_id = self._next_id
        dup.edge_lengths = dict(self.edge_lengths) if self.edge_lengths else None
        return dup

    def side_labels(self, u: int, v: int) -> set[str]:
        """Labels occurring in the component of `u` once edge (u, v) is cut."""
        if not self.has_edge(u, v):
            raise ValueError(f"no edge ({u}, {v})")
        seen = {u}
        stack = [u]
        found: set[str] = set()
        lab = self._leaf_label
        while stack:
            x = stack.pop()
            if x in lab:
                found.add(lab[x])
            for w in self._adj[x]:
                if w not in seen and not (x == u and w == v):
                    seen.add(w)
                    stack.append(w)
        return found

    # ------------------------------------------------------------------
    # edits

    def prune_leaf(self, leaf: int) -> None:
        """Delete `leaf`; if its neighbor drops to degree two, splice it out.

        Pruning the last leaf leaves the empty tree.
        """
        if leaf not in self._leaf_label:
            raise ValueError(f"node {leaf} is not a leaf")
        nbrs = list(self._adj[leaf])
        if self.edge_lengths:
            for w in nbrs:
                self.edge_lengths.pop(frozenset((leaf, w)), None)
        self.remove_node(leaf)
        if nbrs:
            self._tidy(nbrs[0])

    def contract_edge(self, u: int, v: int, *, survivor: int | None = None) -> int:
        """Identify the endpoints of internal edge (u, v); returns the survivor."""
        if not self.has_edge(u, v):
            raise ValueError(f"no edge ({u}, {v})")
        if u in self._leaf_label or v in self._leaf_label:
            raise ValueError("cannot contract a pendant edge")
        if survivor is None:
            survivor = max((u, v), key=lambda x: (len(self._adj[x]), -x))
        elif survivor not in (u, v):
            raise ValueError("survivor must be an endpoint")
        lose = v if survivor == u else u
        del self._adj[survivor][lose]
        del self._adj[lose][survivor]
        for x in self._adj[lose]:
            del self._adj[x][lose]
            self._adj[x][survivor] = None
            self._adj[survivor][x] = None
        del self._adj[lose]
        if self.edge_lengths:
            self.edge_lengths = None
        return survivor

    def _tidy(self, v: int) -> None:
        """Restore normalization around `v` after a removal nearby."""
        while v in self._adj and v not in self._leaf_label:
            deg = len(self._adj[v])
            if deg == 2:
                a, b = self._adj[v]
                if self.edge_lengths is not None:
                    la = self.edge_lengths.pop(frozenset((v, a)), None)
                    lb = self.edge_lengths.pop(frozenset((v, b)), None)
                    if la is not None or lb is not None:
                        self.edge_lengths[frozenset((a, b))] = (la or 0.0) + (lb or 0.0)
                self.remove_node(v)
                self.add_edge(a, b)
                return
            if deg == 1:
                (w,) = self._adj[v]
                self.remove_node(v)
                v = w
                continue
            if deg == 0:
                self.remove_node(v)
            return

    def normalize(self) -> None:
        """Splice out all degree-2 internal nodes and drop degree<=1 ones."""
        for v in list(self.internal_nodes()):
            if v in self._adj:
                self._tidy(v)


# ----------------------------------------------------------------------
# per-edge label partitions and distinct-label counts


@dataclass(frozen=True)
class EdgePartition:
    """Label partition induced by one edge: exclusive sides and common set."""

    edge: tuple[int, int]
    m_u: frozenset[str]
    m_v: frozenset[str]
    common: frozenset[str]

    @property
    def counts(self) -> tuple[int, int, int]:
        return (len(self.m_u), len(self.m_v), len(self.common))


def edge_label_partition(tree: MulTree, edge: tuple[int, int]) -> EdgePartition:
    """Exact label partition of `edge`, computed by two subtree traversals."""
    u, v = edge
    labels_u = tree.side_labels(u, v)
    labels_v = tree.side_labels(v, u)
    return EdgePartition(
        edge=(u, v),
        m_u=frozenset(labels_u - labels_v),
        m_v=frozenset(labels_v - labels_u),
        common=frozenset(labels_u & labels_v),
    )


@dataclass
class CountTable:
    """Distinct-label counts per directed edge.

    ``side_distinct[(u, v)]`` is the number of distinct labels in the
    component of `u` once edge (u, v) is cut.  Exclusive-side cardinalities
    follow as ``num_labels - side_distinct[other side]``.
    """

    num_labels: int
    side_distinct: dict[tuple[int, int], int]

    def distinct_on_side(self, u: int, v: int) -> int:
        return self.side_distinct[(u, v)]

    def exclusive_count(self, u: int, v: int) -> int:
        """|labels only on the u side| of edge (u, v)."""
        return self.num_labels - self.side_distinct[(v, u)]

    def common_count(self, u: int, v: int) -> int:
        return self.side_distinct[(u, v)] + self.side_distinct[(v, u)] - self.num_labels

    def is_informative(self, u: int, v: int) -> bool:
        return self.exclusive_count(u, v) >= 2 and self.exclusive_count(v, u) >= 2

    def edges(self) -> Iterator[tuple[int, int]]:
        return (e for e in self.side_distinct if e[0] < e[1])

    def has_informative_edge(self) -> bool:
        return any(self.is_informative(u, v) for u, v in self.edges())

    def drop_edge(self, u: int, v: int) -> None:
        self.side_distinct.pop((u, v), None)
        self.side_distinct.pop((v, u), None)

    def rekey_edge(self, old: tuple[int, int], new: tuple[int, int]) -> None:
        sd = self.side_distinct
        sd[new] = sd.pop(old)
        sd[(new[1], new[0])] = sd.pop((old[1], old[0]))


def distinct_label_counts(tree: MulTree) -> CountTable:
    """Distinct-label counts for both directions of every edge.

    One bottom-up pass maintains per-label occurrence tallies per subtree,
    merged smallest-into-largest; a subtree's tally yields the count on its
    own side directly and the count on the far side via the number of labels
    whose occurrences it fully contains.  Peak extra memory is O(n).
    """
    mult = tree.label_multiplicities()
    m = len(mult)
    side: dict[tuple[int, int], int] = {}
    if tree.n_edges == 0:
        return CountTable(m, side)

    internals = [v for v in tree.nodes() if not tree.is_leaf(v)]
    root = min(internals) if internals else min(tree.nodes())

    parent: dict[int, int | None] = {root: None}
    order = [root]
    stack = [root]
    adj = tree._adj
    while stack:
        v = stack.pop()
        for w in adj[v]:
            if w != parent[v]:
                parent[w] = v
                order.append(w)
                stack.append(w)

    occ: dict[int, tuple[dict[str, int], int, int]] = {}
    for v in reversed(order):
        if tree.is_leaf(v):
            lab = tree.label_of(v)
            tally = {lab: 1}
            distinct = 1
            full = 1 if mult[lab] == 1 else 0
        else:
            kids = [w for w in adj[v] if w != parent[v]]
            if kids:
                base = max(kids, key=lambda w: len(occ[w][0]))
                tally, distinct, full = occ.pop(base)
                for w in kids:
                    if w == base:
                        continue
                    small, _, _ = occ.pop(w)
                    for lab, k in small.items():
                        cur = tally.get(lab, 0)
                        if cur == 0:
                            distinct += 1
                        new = cur + k
                        tally[lab] = new
                        if new == mult[lab]:
                            full += 1
            else:
                tally, distinct, full = {}, 0, 0
        p = parent[v]
        if p is not None:
            side[(v, p)] = distinct
            side[(p, v)] = m - full
        occ[v] = (tally, distinct, full)
    return CountTable(m, side)


def has_quartet_information(tree: MulTree) -> bool:
    """True when some edge separates two exclusive labels from two others."""
    return distinct_label_counts(tree).has_informative_edge()


# ----------------------------------------------------------------------
# canonical form and isomorphism


def _find_centers(tree: MulTree) -> list[int]:
    degree = {v: tree.degree(v) for v in tree.nodes()}
    layer = [v for v, d in degree.items() if d <= 1]
    remaining = len(degree)
    while remaining > 2:
        remaining -= len(layer)
        nxt = []
        for v in layer:
            for w in tree.neighbors(v):
                degree[w] -= 1
                if degree[w] == 1:
                    nxt.append(w)
            degree[v] = 0
        layer = nxt
    return sorted(layer)


def _encode_rooted(tree: MulTree, root: int, banned: int | None) -> str:
    enc: dict[int, str] = {}
    stack: list[tuple[int, int | None, bool]] = [(root, banned, False)]
    while stack:
        v, parent, done = stack.pop()
        if tree.is_leaf(v):
            enc[v] = escape_label(tree.label_of(v))
            continue
        kids = [w for w in tree.neighbors(v) if w != parent]
        if not done:
            stack.append((v, parent, True))
            stack.extend((w, v, False) for w in kids)
        else:
            enc[v] = "(" + ",".join(sorted(enc[w] for w in kids)) + ")"
    return enc[root]


def canonical_form(tree: MulTree) -> str:
    """Order-invariant encoding; equal iff trees are isomorphic MUL-trees.

    AHU-style bottom-up encoding rooted at the tree's center; for a center
    edge the two rooted encodings are combined in sorted order.
    """
    if tree.n_nodes == 0:
        return ""
    if tree.n_nodes == 1:
        v = next(tree.nodes())
        return escape_label(tree.label_of(v)) if tree.is_leaf(v) else "()"
    centers = _find_centers(tree)
    if len(centers) == 1:
        return _encode_rooted(tree, centers[0], None)
    c1, c2 = centers
    halves = sorted((_encode_rooted(tree, c1, c2), _encode_rooted(tree, c2, c1)))
    return "(" + ",".join(halves) + ")"


def is_isomorphic(a: MulTree, b: MulTree) -> bool:
    """Label-preserving isomorphism of unrooted MUL-trees."""
    if a.n_nodes != b.n_nodes or a.n_leaves != b.n_leaves:
        return False
    return canonical_form(a) == canonical_form(b)
