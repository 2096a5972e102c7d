"""Shared fixtures for the tree-hardy tests."""

import numpy as np
import pytest

from tree_hardy.generators import gen_chain, gen_star
from tree_hardy.models import Exponents, RootedTree, SolverOptions, WeightPair
from tree_hardy.tree import build_tree

from .helpers import ones


@pytest.fixture
def chain3() -> RootedTree:
    return gen_chain(3)


@pytest.fixture
def chain3_ones(chain3: RootedTree) -> WeightPair:
    return ones(chain3)


@pytest.fixture
def single() -> tuple[RootedTree, WeightPair]:
    t = gen_chain(1)
    return t, WeightPair.for_tree(t, [2.0], [3.0])


@pytest.fixture
def small_tree() -> RootedTree:
    """0 -> {1, 2}, 1 -> {3, 4}, 2 -> {5}."""
    return build_tree([None, 0, 0, 1, 1, 2])


@pytest.fixture
def star5() -> RootedTree:
    return gen_star(5)


@pytest.fixture
def e23() -> Exponents:
    return Exponents(p=2.0, q=3.0)


@pytest.fixture
def fast_opts() -> SolverOptions:
    return SolverOptions(restarts=4, max_iter=2000, tol=1e-12)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(12345))
