"""Seeded construction of trees and weights.

Every random draw goes through ``numpy.random.Generator(numpy.random.PCG64(seed))``,
the portable 64-bit PCG generator, so a seed reproduces the same instance on
any platform.
"""

import logging
import math
from typing import Optional, Sequence, Union

import numpy as np

from .config import get_settings
from .models.base import DepthMismatch, InfeasibleModel, InvalidLaw, InvalidSize, SizeCapExceeded
from .models.profile import LevelProfile, LevelWeights
from .models.requests import (
    BoundedBranching,
    ConstantLaw,
    GeometricLaw,
    LevelsLaw,
    LogUniformLaw,
    UniformAttachment,
)
from .models.tree import RootedTree, WeightPair
from .tree import build_tree


logger = logging.getLogger(__name__)

Seed = Union[int, np.random.SeedSequence]
Law = Union[ConstantLaw, GeometricLaw, LogUniformLaw, LevelsLaw]
Model = Union[UniformAttachment, BoundedBranching]


def make_rng(seed: Seed) -> np.random.Generator:
    """The generator every seeded routine draws from."""
    return np.random.Generator(np.random.PCG64(seed))


def _check_cap(n: int, cap: Optional[int]) -> None:
    cap = cap if cap is not None else get_settings().vertex_cap
    if n > cap:
        raise SizeCapExceeded(f"{n} vertices exceed the cap of {cap}")


def gen_chain(n: int, cap: Optional[int] = None) -> RootedTree:
    """Path graph ``0 - 1 - ... - n-1`` rooted at 0."""
    if n < 1:
        raise InvalidSize(f"chain length must be >= 1, got {n}")
    _check_cap(n, cap)
    return build_tree([None] + list(range(n - 1)))


def gen_star(m: int, cap: Optional[int] = None) -> RootedTree:
    """Root 0 with leaves ``1..m``."""
    if m < 0:
        raise InvalidSize(f"leaf count must be >= 0, got {m}")
    _check_cap(m + 1, cap)
    return build_tree([None] + [0] * m)


def gen_regular_tree(
    profile: LevelProfile,
    cap: Optional[int] = None,
    depth_cap: Optional[int] = None,
) -> RootedTree:
    """Tree where every vertex at level ``j`` has exactly ``b_j`` children.

    Vertices are numbered level by level, so level ``j`` holds ``S(j)``
    consecutive ids.
    """
    depth_cap = depth_cap if depth_cap is not None else get_settings().depth_cap
    if profile.depth > depth_cap:
        raise SizeCapExceeded(f"depth {profile.depth} exceeds the cap of {depth_cap}")
    _check_cap(profile.vertex_count, cap)

    parents: list[Optional[int]] = [None]
    frontier = [0]
    for b in profile.branching:
        next_frontier = []
        for v in frontier:
            for _ in range(b):
                next_frontier.append(len(parents))
                parents.append(v)
        frontier = next_frontier
    logger.debug(f"Built regular tree with branching {profile.branching}: {len(parents)} vertices")
    return build_tree(parents)


def gen_random_tree(
    n: int, seed: Seed, model: Optional[Model] = None, cap: Optional[int] = None
) -> RootedTree:
    """Random recursive tree on ``n`` vertices rooted at 0.

    Vertex ``k`` attaches to a parent drawn uniformly from ``0..k-1``; under
    bounded branching, parents already holding ``max_children`` children are
    excluded from the draw.
    """
    if n < 1:
        raise InvalidSize(f"tree size must be >= 1, got {n}")
    _check_cap(n, cap)
    model = model or UniformAttachment()
    rng = make_rng(seed)
    parents: list[Optional[int]] = [None]

    if isinstance(model, UniformAttachment):
        for k in range(1, n):
            parents.append(int(rng.integers(0, k)))
        return build_tree(parents)

    if model.max_children == 0 and n > 1:
        raise InfeasibleModel("bounded-branching with max_children=0 admits only a single vertex")
    open_parents = [0]
    child_count = [0] * n
    for k in range(1, n):
        slot = int(rng.integers(0, len(open_parents)))
        p = open_parents[slot]
        parents.append(p)
        child_count[p] += 1
        if child_count[p] == model.max_children:
            open_parents[slot] = open_parents[-1]
            open_parents.pop()
        open_parents.append(k)
    return build_tree(parents)


def gen_weights(t: RootedTree, seed: Seed, law: Law) -> np.ndarray:
    """One weight function on ``t`` drawn from ``law``."""
    depth = t.level_index
    if isinstance(law, ConstantLaw):
        return np.full(t.n, float(law.c))
    if isinstance(law, GeometricLaw):
        return np.power(float(law.rho), depth.astype(np.float64))
    if isinstance(law, LogUniformLaw):
        rng = make_rng(seed)
        return np.exp(rng.uniform(math.log(law.lo), math.log(law.hi), size=t.n))
    if isinstance(law, LevelsLaw):
        if len(law.levels) != t.height + 1:
            raise DepthMismatch(f"{len(law.levels)} level values for a tree of height {t.height}")
        return np.asarray(law.levels, dtype=np.float64)[depth]
    raise InvalidLaw(f"unsupported weight law {law!r}")


def gen_weight_pair(t: RootedTree, seed: Seed, u_law: Law, w_law: Law) -> WeightPair:
    """Independent ``u`` and ``w`` draws from spawned child seeds."""
    root_seq = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
    u_seq, w_seq = root_seq.spawn(2)
    return WeightPair.for_tree(t, gen_weights(t, u_seq, u_law), gen_weights(t, w_seq, w_law))


def level_weight_pair(t: RootedTree, lw: LevelWeights) -> WeightPair:
    """Realize ``u(xi) = u_j``, ``w(xi) = w_j`` on ``t``."""
    u = gen_weights(t, 0, LevelsLaw(levels=lw.u_levels))
    w = gen_weights(t, 0, LevelsLaw(levels=lw.w_levels))
    return WeightPair.for_tree(t, u, w)


def is_level_constant(t: RootedTree, x: Sequence[float]) -> bool:
    arr = np.asarray(x, dtype=np.float64)
    return all(np.all(arr[level] == arr[level[0]]) for level in t.levels)


def level_weights_of(t: RootedTree, wt: WeightPair) -> LevelWeights:
    """Recover level weights from a weight pair that is constant on levels."""
    if not (is_level_constant(t, wt.u) and is_level_constant(t, wt.w)):
        raise DepthMismatch("weights are not constant on levels")
    return LevelWeights(
        u_levels=tuple(float(wt.u_array[level[0]]) for level in t.levels),
        w_levels=tuple(float(wt.w_array[level[0]]) for level in t.levels),
    )


def descendant_level_counts(t: RootedTree) -> list[np.ndarray]:
    """``counts[xi][k] = card V_k(xi)`` for ``k = 0..height - depth(xi)``."""
    counts: list[np.ndarray] = [np.zeros(0)] * t.n
    for level in reversed(t.levels):
        for v in level:
            v = int(v)
            row = np.zeros(t.height - t.depth[v] + 1, dtype=np.int64)
            row[0] = 1
            for c in t.children[v]:
                child = counts[c]
                row[1 : 1 + len(child)] += child
            counts[v] = row
    return counts


def measure_regularity(t: RootedTree, S: Sequence[float]) -> float:
    """Smallest ``C*`` with ``C*^{-1} S(j')/S(j) <= card V_{j'-j}(xi) <= C* S(j')/S(j)``.

    Counts every vertex and every deeper level exhaustively; returns ``inf``
    when some level below a vertex is empty.
    """
    if len(S) < t.height + 1:
        raise DepthMismatch(f"S has {len(S)} entries, tree height is {t.height}")
    worst = 1.0
    for v, row in enumerate(descendant_level_counts(t)):
        j = t.depth[v]
        for k, card in enumerate(row):
            expected = S[j + k] / S[j]
            if card == 0:
                return math.inf
            worst = max(worst, card / expected, expected / card)
    return worst


def profile_of(t: RootedTree) -> Optional[LevelProfile]:
    """The branching profile of ``t`` when it is generator-exact regular, else ``None``.

    Exact means every vertex of level ``j < height`` has the same number
    ``b_j >= 2`` of children.
    """
    branching = []
    for level in t.levels[:-1]:
        counts = {len(t.children[int(v)]) for v in level}
        if len(counts) != 1:
            return None
        b = counts.pop()
        if b < 2:
            return None
        branching.append(b)
    return LevelProfile(branching=tuple(branching))
