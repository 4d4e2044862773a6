import io
from random import Random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from multred.generate import random_mul_tree
from multred.newick import (
    NewickSyntaxError,
    parse_collection,
    parse_newick,
    write_newick,
)
from multred.tree import is_isomorphic

from conftest import E1_NEWICK, E2_NEWICK


class TestParse:
    def test_e1_shape(self, e1):
        assert e1.n_leaves == 8
        assert e1.labels() == {"a", "b", "c", "d", "e", "f"}
        mult = e1.label_multiplicities()
        assert mult["b"] == 2 and mult["c"] == 2
        assert all(mult[x] == 1 for x in "adef")

    def test_single_leaf(self):
        t = parse_newick("(a);")
        assert t.n_leaves == 1 and t.n_nodes == 1 and t.n_edges == 0
        assert t.labels() == {"a"}

    def test_bare_leaf(self):
        t = parse_newick("a;")
        assert t.n_leaves == 1

    def test_e2_shape(self, e2):
        assert e2.n_leaves == 6
        internals = list(e2.internal_nodes())
        assert len(internals) == 2
        u, v = internals
        assert e2.has_edge(u, v)
        sides = sorted(
            sorted(e2.label_of(x) for x in e2.neighbors(w) if e2.is_leaf(x))
            for w in (u, v)
        )
        assert sides == [["a", "b", "f"], ["c", "d", "f"]]

    def test_degree_two_root_suppressed(self):
        t = parse_newick("((a,b),(c,d));")
        assert all(t.degree(v) >= 3 for v in t.internal_nodes())

    def test_lengths_and_names_discarded(self):
        t = parse_newick("((a:0.1,b:0.2)inner:0.5,(c:0.3,d:0.4)other:0.6)root;")
        assert t.labels() == {"a", "b", "c", "d"}
        assert t.edge_lengths is None

    def test_keep_lengths_flag(self):
        t = parse_newick("(a:1.5,b:2.5,c:1.0);", keep_lengths=True)
        assert t.edge_lengths is not None
        assert sorted(t.edge_lengths.values()) == [1.0, 1.5, 2.5]

    def test_quoted_labels(self):
        t = parse_newick("('weird (name)','it''s',plain);")
        assert t.labels() == {"weird (name)", "it's", "plain"}

    def test_whitespace_trimmed(self):
        t = parse_newick("( a , b , c );")
        assert t.labels() == {"a", "b", "c"}


class TestParseErrors:
    @pytest.mark.parametrize(
        "text",
        [
            "((a,b);",        # unbalanced '('
            "(a,b));",        # unbalanced ')'
            "(a,,b);",        # empty subtree
            "();",            # no leaves
            "(a,b)",          # missing ';'
            "(a,b); junk",    # trailing tokens
            "a,b;",           # comma outside parentheses
            "(a:x,b);",       # bad branch length
        ],
    )
    def test_rejected(self, text):
        with pytest.raises(NewickSyntaxError):
            parse_newick(text)

    def test_error_position(self):
        with pytest.raises(NewickSyntaxError) as err:
            parse_newick("(a,\n(b,);")
        assert err.value.line == 2


class TestWrite:
    def test_e2_canonical(self, e2):
        assert write_newick(e2) == "((a,b,f),(c,d,f));"

    def test_single_leaf(self):
        assert write_newick(parse_newick("(a);")) == "(a);"

    def test_round_trip_e1(self, e1):
        assert is_isomorphic(parse_newick(write_newick(e1)), e1)

    def test_child_order_irrelevant(self):
        a = parse_newick("((a,b,f),(c,d,f));")
        b = parse_newick("((f,d,c),(f,b,a));")
        assert write_newick(a) == write_newick(b)

    def test_distinct_trees_distinct_text(self, e1, e2):
        assert write_newick(e1) != write_newick(e2)


class TestCollection:
    def test_two_trees(self):
        doc = parse_collection(io.StringIO(f"{E1_NEWICK}\n{E2_NEWICK}\n"))
        assert len(doc) == 2
        assert doc.line_numbers == [1, 2]
        assert not doc.errors

    def test_empty_file(self):
        doc = parse_collection(io.StringIO(""))
        assert len(doc) == 0

    def test_lenient_collects_errors(self):
        text = f"{E1_NEWICK}\n((oops;\n{E2_NEWICK}\n"
        doc = parse_collection(io.StringIO(text))
        assert len(doc) == 2
        assert len(doc.errors) == 1
        assert doc.errors[0].line == 2

    def test_strict_aborts(self):
        text = f"{E1_NEWICK}\n((oops;\n{E2_NEWICK}\n"
        with pytest.raises(NewickSyntaxError):
            parse_collection(io.StringIO(text), strict=True)

    def test_comments_and_blanks_skipped(self):
        doc = parse_collection(io.StringIO(f"# header\n\n{E2_NEWICK}\n"))
        assert len(doc) == 1
        assert doc.line_numbers == [3]

    def test_several_per_line(self):
        doc = parse_collection(io.StringIO("(a,b,c);(d,e,g);\n"))
        assert len(doc) == 2


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10**6), st.integers(4, 14))
def test_round_trip_random(seed, n):
    tree = random_mul_tree(Random(seed), n)
    back = parse_newick(write_newick(tree))
    assert is_isomorphic(back, tree)
    assert all(back.degree(v) >= 3 for v in back.internal_nodes())
