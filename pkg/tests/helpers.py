"""Instance builders shared by the test modules."""

from tree_hardy.generators import gen_random_tree, gen_weight_pair
from tree_hardy.models import LogUniformLaw, RootedTree, WeightPair


def ones(t: RootedTree) -> WeightPair:
    return WeightPair.for_tree(t, [1.0] * t.n, [1.0] * t.n)


def random_instance(n: int, seed: int, lo: float = 0.1, hi: float = 10.0) -> tuple[RootedTree, WeightPair]:
    """Uniform-attachment tree with log-uniform weights in ``[lo, hi]``."""
    t = gen_random_tree(n, seed)
    law = LogUniformLaw(lo=lo, hi=hi)
    return t, gen_weight_pair(t, seed, law, law)
