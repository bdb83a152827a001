import random
from fractions import Fraction as Q

import pytest
from hypothesis import given, strategies as st

from thompson.acceptance import X0_PAIR, X1_PAIR
from thompson.catalog import X0, X1
from thompson.plhomeo import PLMap, compose, invert, validate
from thompson.treepair import (
    TreePair,
    from_plmap,
    is_identity,
    leaf_count,
    leaf_partition,
    random_element,
    reduce,
    to_plmap,
    tree_from_str,
    tree_to_str,
)

from conftest import tree_pairs

L = None


def test_leaf_partitions():
    assert leaf_partition(L) == [(0, 1)]
    assert leaf_partition((L, L)) == [(0, Q(1, 2)), (Q(1, 2), 1)]
    assert leaf_partition(((L, L), L)) == [(0, Q(1, 4)), (Q(1, 4), Q(1, 2)), (Q(1, 2), 1)]


def test_parenthesis_strings():
    t = ((L, L), L)
    assert tree_to_str(t) == "((()())())"
    assert tree_from_str("((()())())") == t
    assert tree_from_str(" ( ) ") is None
    with pytest.raises(ValueError):
        tree_from_str("(()")
    with pytest.raises(ValueError):
        tree_from_str("()()")


def test_unequal_leaf_counts_rejected():
    with pytest.raises(ValueError):
        TreePair((L, L), L)


def test_identity_pair():
    assert to_plmap(TreePair(L, L)) == PLMap.identity()
    assert from_plmap(PLMap.identity()) == TreePair(L, L)
    assert to_plmap(TreePair((L, L), (L, L))) == PLMap.identity()
    assert reduce(TreePair(((L, L), L), ((L, L), L))) == TreePair(L, L)


def test_x0_pair():
    assert to_plmap(X0_PAIR) == X0
    assert from_plmap(X0) == X0_PAIR
    assert from_plmap(X1) == X1_PAIR
    assert X0_PAIR.is_reduced()


def test_word_problem_examples():
    assert is_identity([(X0_PAIR, 1), (X0_PAIR, -1)])
    assert not is_identity(X0_PAIR)
    assert not is_identity([(X0_PAIR, 2), (X1_PAIR, -1)])


def test_from_plmap_rejects_non_f():
    with pytest.raises(ValueError):
        from_plmap(PLMap(((0, 0), (Q(1, 3), Q(1, 2)), (1, 1))))


def test_random_element():
    assert random_element(1, 5) == TreePair.identity()
    assert random_element(13, 99) == random_element(13, 99)
    assert random_element(13, 99).leaves == 13
    with pytest.raises(ValueError):
        random_element(0, 1)


def test_random_elements_validate():
    for seed in range(500):
        p = random_element(20, seed)
        assert p.leaves == 20
        assert validate(to_plmap(p), "F") is None


def test_random_tree_shapes_are_uniform_on_small_sizes():
    # four leaves: Catalan(3) = 5 shapes, each should appear
    shapes = {random_element(4, s).domain for s in range(200)}
    assert len(shapes) == 5


@given(tree_pairs())
def test_roundtrip(p):
    assert from_plmap(to_plmap(p)) == reduce(p)


@given(tree_pairs())
def test_reduce_is_semantic_identity_and_idempotent(p):
    r = reduce(p)
    assert to_plmap(r) == to_plmap(p)
    assert reduce(r) == r
    assert r.is_reduced()


@given(tree_pairs(15), tree_pairs(15))
def test_product_is_homomorphism(p, q):
    assert to_plmap(p * q) == compose(to_plmap(p), to_plmap(q))
    assert to_plmap(p.inverse()) == invert(to_plmap(p))


@given(st.lists(st.sampled_from([1, -1, 2, -2]), max_size=20))
def test_words_map_to_compositions(word):
    gens = {1: (X0_PAIR, X0), 2: (X1_PAIR, X1)}
    tp, pl = TreePair.identity(), PLMap.identity()
    for letter in word:
        pair, elem = gens[abs(letter)]
        tp = tp * (pair if letter > 0 else pair.inverse())
        pl = compose(pl, elem if letter > 0 else invert(elem))
    assert to_plmap(tp) == pl
    assert is_identity(tp) == pl.is_identity()


def test_json():
    p = random_element(7, 3)
    assert TreePair.from_json(p.to_json()) == p
    assert leaf_count(tree_from_str(p.to_json()["domain"])) == 7
