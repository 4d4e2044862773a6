from random import Random

import pytest

from multred.generate import random_mul_tree
from multred.newick import parse_newick
from multred.oracle import make_quartet

E1_NEWICK = "((a,f),(b,c),((b,c),(d,e)));"
E2_NEWICK = "((a,b,f),(c,d,f));"

# Information content of the E1 fixture, enumerated by hand from its edge
# partitions: the {a,f} pendant edge pairs af against all pairs of
# {b,c,d,e}, the {d,e} pendant edge pairs de against all pairs of
# {a,b,c,f}, and the central edge adds only af|de again.
E1_INFO = frozenset(
    {
        make_quartet("a", "f", "b", "c"),
        make_quartet("a", "f", "b", "d"),
        make_quartet("a", "f", "b", "e"),
        make_quartet("a", "f", "c", "d"),
        make_quartet("a", "f", "c", "e"),
        make_quartet("a", "f", "d", "e"),
        make_quartet("a", "b", "d", "e"),
        make_quartet("a", "c", "d", "e"),
        make_quartet("b", "f", "d", "e"),
        make_quartet("c", "f", "d", "e"),
        make_quartet("b", "c", "d", "e"),
    }
)


@pytest.fixture
def e1():
    return parse_newick(E1_NEWICK)


@pytest.fixture
def e2():
    return parse_newick(E2_NEWICK)


def small_random_trees(seed: int, count: int, min_leaves: int = 4, max_leaves: int = 12):
    rng = Random(seed)
    return [random_mul_tree(rng, rng.randint(min_leaves, max_leaves)) for _ in range(count)]
