"""Tests for tree construction, order queries and aggregates."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tree_hardy.generators import gen_chain
from tree_hardy.models import (
    CycleDetected,
    DanglingParent,
    DimensionMismatch,
    InvalidExponent,
    InvalidVertex,
    MultipleRoots,
    NegativeEntry,
)
from tree_hardy.tree import (
    build_tree,
    level_sets,
    lr_norm,
    maximal_vertices,
    path_between,
    path_norms,
    path_sums,
    path_to_root,
    subtree_norms,
    subtree_sums,
    subtree_vertices,
    vertex_set_is_subtree,
)


def test_build_tree_links(small_tree):
    assert small_tree.n == 6
    assert small_tree.root == 0
    assert small_tree.children[1] == (3, 4)
    assert small_tree.depth == (0, 1, 1, 2, 2, 2)
    assert small_tree.height == 2


def test_build_tree_keeps_ids_with_nonzero_root():
    t = build_tree([1, None, 1])
    assert t.root == 1
    assert t.children[1] == (0, 2)


@pytest.mark.parametrize(
    "parents, error",
    [
        ([None, None], MultipleRoots),
        ([1, 0], MultipleRoots),
        ([], MultipleRoots),
        ([None, 5], DanglingParent),
        ([None, 2, 3, 1], CycleDetected),
    ],
)
def test_build_tree_rejects_malformed_parent_lists(parents, error):
    with pytest.raises(error):
        build_tree(parents)


@pytest.mark.parametrize("parents, vertex", [([None, None, 0], 1), ([1, 2, 0], 0), ([1, 2, 1], 1)])
def test_malformed_parent_lists_name_a_vertex(parents, vertex):
    with pytest.raises(MultipleRoots) as info:
        build_tree(parents)
    assert info.value.vertex == vertex
    assert info.value.exit_code == 4


def test_order_queries(small_tree):
    assert subtree_vertices(small_tree, 1) == {1, 3, 4}
    assert subtree_vertices(small_tree, 5) == {5}
    assert path_to_root(small_tree, 4) == (0, 1, 4)
    assert path_between(small_tree, 1, 4) == (1, 4)
    assert level_sets(small_tree) == [{0}, {1, 2}, {3, 4, 5}]
    assert small_tree.is_ancestor(0, 5)
    assert not small_tree.is_ancestor(1, 5)


def test_path_between_requires_ancestor(small_tree):
    with pytest.raises(ValueError):
        path_between(small_tree, 2, 3)


def test_invalid_vertex(small_tree):
    with pytest.raises(InvalidVertex):
        subtree_vertices(small_tree, 6)


def test_maximal_vertices_and_subtree_shape(small_tree):
    assert maximal_vertices(small_tree, {0, 1, 3}) == {3}
    assert maximal_vertices(small_tree, {0, 1, 2}) == {1, 2}
    assert vertex_set_is_subtree(small_tree, {0, 1, 3})
    assert not vertex_set_is_subtree(small_tree, {3, 4})
    assert not vertex_set_is_subtree(small_tree, set())


def test_sums(small_tree):
    x = np.arange(1.0, 7.0)
    np.testing.assert_array_equal(subtree_sums(small_tree, x), [21.0, 11.0, 9.0, 4.0, 5.0, 6.0])
    np.testing.assert_array_equal(path_sums(small_tree, x), [1.0, 3.0, 4.0, 7.0, 8.0, 10.0])


def test_norms_on_chain():
    t = gen_chain(3)
    np.testing.assert_allclose(subtree_norms(t, [1.0, 1.0, 1.0], 3.0), [3 ** (1 / 3), 2 ** (1 / 3), 1.0])
    np.testing.assert_allclose(path_norms(t, [1.0, 1.0, 1.0], 2.0), [1.0, math.sqrt(2), math.sqrt(3)])


def test_norms_survive_extreme_weights():
    t = gen_chain(4)
    x = [1e200, 1e200, 1e-200, 0.0]
    norms = subtree_norms(t, x, 5.0)
    assert np.all(np.isfinite(norms))
    assert norms[0] == pytest.approx(1e200 * 2 ** (1 / 5))
    assert norms[2] == pytest.approx(1e-200)
    assert norms[3] == 0.0
    assert lr_norm([1e300, 1e300], 4.0) == pytest.approx(1e300 * 2 ** 0.25)


def test_vector_length_is_checked(small_tree):
    with pytest.raises(DimensionMismatch):
        subtree_sums(small_tree, [1.0, 2.0])


def test_exponent_range_is_checked(small_tree):
    with pytest.raises(InvalidExponent):
        subtree_norms(small_tree, np.ones(6), 1.0)


@st.composite
def weighted_trees(draw):
    n = draw(st.integers(min_value=1, max_value=50))
    parents = [None] + [draw(st.integers(min_value=0, max_value=k - 1)) for k in range(1, n)]
    weight = st.one_of(st.just(0.0), st.floats(min_value=1e-3, max_value=1e3))
    x = draw(st.lists(weight, min_size=n, max_size=n))
    r = draw(st.sampled_from([1.5, 2.0, 3.0, 7.0]))
    return build_tree(parents), np.array(x), r


@settings(max_examples=60, deadline=None)
@given(weighted_trees())
def test_aggregates_match_direct_sums(instance):
    t, x, r = instance
    subtree = subtree_norms(t, x, r)
    path = path_norms(t, x, r)
    for v in range(t.n):
        below = sorted(subtree_vertices(t, v))
        above = list(path_to_root(t, v))
        assert subtree[v] == pytest.approx(np.sum(x[below] ** r) ** (1 / r), rel=1e-12, abs=1e-300)
        assert path[v] == pytest.approx(np.sum(x[above] ** r) ** (1 / r), rel=1e-12, abs=1e-300)


@pytest.mark.parametrize("aggregate", [subtree_norms, path_norms])
@pytest.mark.parametrize("bad", [-1.0, math.nan, math.inf])
def test_aggregates_reject_bad_entries(small_tree, aggregate, bad):
    x = np.ones(6)
    x[3] = bad
    with pytest.raises(NegativeEntry) as info:
        aggregate(small_tree, x, 2.0)
    assert info.value.vertex == 3
    assert info.value.exit_code == 2
