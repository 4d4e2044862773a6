from random import Random

import pytest

from multred.generate import (
    random_information_preserving_edits,
    random_mul_tree,
    random_singly_tree,
)
from multred.newick import parse_newick, write_newick
from multred.oracle import edge_quartets, information_content
from multred.reduce import (
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
from multred.tree import (
    distinct_label_counts,
    edge_label_partition,
    has_quartet_information,
    is_isomorphic,
)

from test_tree import find_edge_by_partition


class TestPreprocess:
    def test_e1_contracts_the_two_empty_side_edges(self, e1):
        before = information_content(e1)
        report = ReductionReport()
        tree, counts = preprocess(e1, report)
        assert report.contractions_uninformative == 2
        assert information_content(tree) == before
        assert all(counts.is_informative(u, v) for u, v in tree.internal_edges())

    def test_many_uninformative_edges_contracted_first(self):
        # three sibling cherries labeled alike plus one duplicated cherry:
        # four internal edges with an empty far side
        t = parse_newick("((a,f),(b,c),((b,c),(d,e),(d,e)));")
        before = information_content(t)
        report = ReductionReport()
        tree, counts = preprocess(t, report)
        assert report.contractions_uninformative == 4
        assert information_content(tree) == before
        assert all(counts.is_informative(u, v) for u, v in tree.internal_edges())

    def test_resolved_singly_tree_untouched(self):
        t = parse_newick("((a,b),(c,d),(e,g));")
        report = ReductionReport()
        tree, _ = preprocess(t, report)
        assert report.contractions_uninformative == 0
        assert tree.n_edges == 9

    def test_counts_stay_valid_for_survivors(self, e1):
        tree, counts = preprocess(e1, None)
        for u, v in tree.edges():
            p = edge_label_partition(tree, (u, v))
            assert counts.exclusive_count(u, v) == len(p.m_u)
            assert counts.exclusive_count(v, u) == len(p.m_v)


class TestCompareAdjacent:
    def _preprocessed_e1(self, e1):
        tree, counts = preprocess(e1, None)
        central = find_edge_by_partition(tree, {"a", "f"}, {"d", "e"}, {"b", "c"})
        af_side = find_edge_by_partition(tree, {"a", "f"}, {"b", "c", "d", "e"}, set())
        de_side = find_edge_by_partition(tree, {"d", "e"}, {"a", "b", "c", "f"}, set())
        return tree, counts, central, af_side, de_side

    def test_central_subsumed_by_af_neighbor(self, e1):
        tree, counts, central, af_side, _ = self._preprocessed_e1(e1)
        verdict = compare_adjacent(counts, central, af_side)
        assert verdict is DominanceOrdering.LEFT_SUBSUMED
        assert edge_quartets(tree, central) <= edge_quartets(tree, af_side)

    def test_central_subsumed_by_de_neighbor(self, e1):
        tree, counts, central, _, de_side = self._preprocessed_e1(e1)
        assert compare_adjacent(counts, central, de_side) is DominanceOrdering.LEFT_SUBSUMED
        assert compare_adjacent(counts, de_side, central) is DominanceOrdering.RIGHT_SUBSUMED

    def test_caterpillar_incomparable(self):
        t = parse_newick("((a,b),(c,d),((e,g),(h,i)));")
        counts = distinct_label_counts(t)
        internal = list(t.internal_edges())
        for i, e1 in enumerate(internal):
            for e2 in internal[i + 1:]:
                if set(e1) & set(e2):
                    assert compare_adjacent(counts, e1, e2) is DominanceOrdering.INCOMPARABLE

    def test_equal_pair(self):
        t = parse_newick("((a,b,x),x,(c,d,x));")
        counts = distinct_label_counts(t)
        e1, e2 = sorted(t.internal_edges())
        assert compare_adjacent(counts, e1, e2) is DominanceOrdering.EQUAL

    def test_non_adjacent_rejected(self, e1):
        counts = distinct_label_counts(e1)
        af_side = find_edge_by_partition(e1, {"a", "f"}, {"b", "c", "d", "e"}, set())
        de_side = find_edge_by_partition(e1, {"d", "e"}, {"a", "b", "c", "f"}, set())
        with pytest.raises(ValueError):
            compare_adjacent(counts, af_side, de_side)

    def test_verdicts_match_oracle_on_random_trees(self):
        rng = Random(23)
        checked = 0
        for _ in range(150):
            t = random_mul_tree(rng, rng.randint(6, 12))
            counts = distinct_label_counts(t)
            deltas = {e: edge_quartets(t, e) for e in t.internal_edges()}
            informative = [e for e, d in deltas.items() if d]
            for i, e1 in enumerate(informative):
                for e2 in informative[i + 1:]:
                    if not set(e1) & set(e2):
                        continue
                    fwd = deltas[e1] <= deltas[e2]
                    bwd = deltas[e2] <= deltas[e1]
                    expected = {
                        (True, True): DominanceOrdering.EQUAL,
                        (True, False): DominanceOrdering.LEFT_SUBSUMED,
                        (False, True): DominanceOrdering.RIGHT_SUBSUMED,
                        (False, False): DominanceOrdering.INCOMPARABLE,
                    }[(fwd, bwd)]
                    assert compare_adjacent(counts, e1, e2) is expected
                    checked += 1
        assert checked > 50


class TestContractDominated:
    def test_e1_central_contracted(self, e1):
        before = information_content(e1)
        tree, counts = preprocess(e1, None)
        report = ReductionReport()
        tree = contract_dominated_paths(tree, counts, report)
        assert report.contractions_dominated == 1
        assert information_content(tree) == before
        center = max(tree.internal_nodes(), key=tree.degree)
        bouquet = sorted(
            tree.label_of(x) for x in tree.neighbors(center) if tree.is_leaf(x)
        )
        assert bouquet == ["b", "b", "c", "c"]

    def test_equal_information_deletes_branches(self):
        t = parse_newick("((a,b,x),x,(c,d,x));")
        before = information_content(t)
        tree, counts = preprocess(t, None)
        report = ReductionReport()
        tree = contract_dominated_paths(tree, counts, report)
        assert report.subtrees_deleted == 1
        assert report.contractions_dominated == 1
        assert information_content(tree) == before
        assert is_isomorphic(tree, parse_newick("((a,b,x),(c,d,x));"))

    def test_fixed_point_when_incomparable(self):
        t = parse_newick("((a,b),(c,d),((e,g),(h,i)));")
        tree, counts = preprocess(t, None)
        report = ReductionReport()
        n_edges = tree.n_edges
        tree = contract_dominated_paths(tree, counts, report)
        assert tree.n_edges == n_edges
        assert report.contractions_dominated == 0


class TestPruningStages:
    def test_nonparticipating_noop_with_information(self, e1):
        tree, counts = preprocess(e1, None)
        tree = contract_dominated_paths(tree, counts, None)
        n = tree.n_leaves
        tree = prune_nonparticipating_labels(tree)
        assert tree.n_leaves == n

    def test_star_fully_pruned(self):
        t = parse_newick("(a,b,c,d,e);")
        report = ReductionReport()
        t = prune_nonparticipating_labels(t, None, report)
        assert t.n_nodes == 0
        assert report.leaves_pruned_nonparticipating == 5

    def test_quartet_free_taxon_pruned(self):
        # one once-occurring taxon whose every separating edge resolves
        # nothing: the whole tree carries no quartets and dissolves
        t = parse_newick("((a,b,q),(a,b));")
        assert not has_quartet_information(t)
        report = ReductionReport()
        t = prune_nonparticipating_labels(t, None, report)
        assert t.n_nodes == 0
        assert report.leaves_pruned_nonparticipating == 5

    def test_dedup_merged_node(self):
        t = parse_newick("((a,f),(b,c,b,c),(d,e));")
        before = information_content(t)
        report = ReductionReport()
        t = dedup_pendant_leaves(t, report)
        assert report.leaves_pruned_pendant_dup == 2
        assert information_content(t) == before
        assert sorted(t.label_multiplicities().values()) == [1] * 6

    def test_dedup_all_distinct_unchanged(self, e2):
        n = e2.n_leaves
        dedup_pendant_leaves(e2, None)
        assert e2.n_leaves == n

    def test_dedup_triple(self):
        t = parse_newick("((x,x,x,a),(b,c));")
        report = ReductionReport()
        t = dedup_pendant_leaves(t, report)
        assert report.leaves_pruned_pendant_dup == 2
        assert t.label_multiplicities()["x"] == 1

    def test_spanning_e2_untouched(self, e2):
        n = e2.n_leaves
        prune_spanning_redundant(e2, None)
        assert e2.n_leaves == n

    def test_spanning_prunes_branching_copy(self):
        # x at three pendant nodes along a path; the middle node sits on the
        # span of the other two, so its copy goes and the end copies stay
        t = parse_newick("((x,a,b),(x,c,d),x,e);")
        before = information_content(t)
        report = ReductionReport()
        t = prune_spanning_redundant(t, report)
        assert report.leaves_pruned_spanning == 1
        assert information_content(t) == before
        assert t.label_multiplicities()["x"] == 2
        for v in t.internal_nodes():
            attached = {t.label_of(x) for x in t.neighbors(v) if t.is_leaf(x)}
            if "e" in attached:
                assert "x" not in attached

    def test_spanning_ignores_single_copies(self):
        t = parse_newick("((a,b),(c,d),(e,g));")
        n = t.n_leaves
        prune_spanning_redundant(t, None)
        assert t.n_leaves == n


class TestReduceToMrf:
    def test_e1_full_reduction(self, e1):
        mrf, report = reduce_to_mrf(e1)
        assert information_content(mrf) == information_content(e1)
        assert mrf.is_singly_labeled()
        assert mrf.n_leaves == 6
        assert mrf.n_nodes == 9
        pendant_sets = sorted(
            "".join(sorted(mrf.label_of(x) for x in mrf.neighbors(v) if mrf.is_leaf(x)))
            for v in mrf.internal_nodes()
        )
        assert pendant_sets == ["af", "bc", "de"]
        assert report.input_leaves == 8 and report.output_leaves == 6
        assert report.taxon_loss_step1_pct == 0.0

    def test_e2_is_its_own_mrf(self, e2):
        mrf, report = reduce_to_mrf(e2)
        assert is_isomorphic(mrf, e2)
        assert not mrf.is_singly_labeled()
        assert report.output_labels == 5

    def test_information_free_input_becomes_empty(self):
        mrf, report = reduce_to_mrf(parse_newick("(a,b,c,d);"))
        assert mrf.n_nodes == 0
        assert report.no_information

    def test_empty_input(self):
        t = parse_newick("(a);")
        t.prune_leaf(next(t.leaves()))
        mrf, report = reduce_to_mrf(t)
        assert mrf.n_nodes == 0 and report.no_information

    def test_input_not_mutated(self, e1):
        before = write_newick(e1)
        reduce_to_mrf(e1)
        assert write_newick(e1) == before

    def test_random_information_preserved_and_idempotent(self):
        rng = Random(31)
        for _ in range(60):
            t = random_mul_tree(rng, rng.randint(4, 12))
            mrf, _ = reduce_to_mrf(t)
            assert information_content(mrf) == information_content(t)
            again, _ = reduce_to_mrf(mrf)
            assert is_isomorphic(again, mrf)

    def test_same_information_same_mrf(self):
        rng = Random(37)
        for _ in range(25):
            t = random_mul_tree(rng, rng.randint(4, 10))
            edited = random_information_preserving_edits(t, rng, rng.randint(1, 5))
            m1, _ = reduce_to_mrf(t)
            m2, _ = reduce_to_mrf(edited)
            assert is_isomorphic(m1, m2)

    def test_singly_labeled_inputs_pass_through(self):
        rng = Random(41)
        for _ in range(25):
            t = random_singly_tree(rng, rng.randint(4, 12))
            mrf, _ = reduce_to_mrf(t)
            assert information_content(mrf) == information_content(t)
            assert mrf.is_singly_labeled()
            if has_quartet_information(t):
                assert is_isomorphic(mrf, t)

    def test_agrees_with_greedy_oracle_reduction(self):
        # independent route to the same answer: apply oracle-verified single
        # edits greedily until none applies
        rng = Random(43)
        for _ in range(50):
            t = random_mul_tree(rng, rng.randint(4, 10))
            mrf, _ = reduce_to_mrf(t)
            assert is_isomorphic(mrf, _greedy_oracle_mrf(t))


def _greedy_oracle_mrf(tree):
    t = tree.copy()
    while True:
        base = information_content(t)
        for leaf in sorted(t.leaves()):
            trial = t.copy()
            trial.prune_leaf(leaf)
            if information_content(trial) == base:
                t = trial
                break
        else:
            for edge in sorted(t.internal_edges()):
                trial = t.copy()
                trial.contract_edge(*edge)
                if information_content(trial) == base:
                    t = trial
                    break
            else:
                return t
