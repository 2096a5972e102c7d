"""Tree-core operations: construction, the tree order, and linear-time aggregates.

All aggregates run one pass per tree level; within a level the work is a
vectorized numpy gather/scatter, so the total cost is linear in ``n``.
"""

import logging
from typing import AbstractSet, Iterable, Optional, Sequence

import numpy as np

from .models.base import (
    CycleDetected,
    DanglingParent,
    DimensionMismatch,
    InvalidExponent,
    MultipleRoots,
    NegativeEntry,
)
from .models.tree import RootedTree


logger = logging.getLogger(__name__)


def build_tree(parent_list: Sequence[Optional[int]]) -> RootedTree:
    """Build a validated rooted tree from a parent list.

    Args:
        parent_list: ``parent_list[v]`` is the parent of ``v``; exactly one entry
            is ``None`` (the root). Vertex ids are preserved.

    Raises:
        MultipleRoots: zero or several ``None`` entries.
        DanglingParent: a parent id outside ``0..n-1``.
        CycleDetected: some vertex never reaches the root.
    """
    n = len(parent_list)
    roots = [v for v, p in enumerate(parent_list) if p is None]
    if len(roots) > 1:
        raise MultipleRoots(f"expected exactly one root, found {roots}", vertex=roots[1])
    for v, p in enumerate(parent_list):
        if p is not None and not 0 <= p < n:
            raise DanglingParent(f"vertex {v} has parent {p} outside 0..{n - 1}", vertex=v)
    if not roots:
        if n == 0:
            raise MultipleRoots("expected exactly one root, the parent list is empty")
        # without a root every parent walk ends on a cycle
        seen: set[int] = set()
        v = 0
        while v not in seen:
            seen.add(v)
            v = parent_list[v]  # type: ignore[assignment]
        raise MultipleRoots(f"no vertex is a root; vertex {v} lies on a parent cycle", vertex=v)
    root = roots[0]

    depth = [-1] * n
    depth[root] = 0
    for start in range(n):
        path = []
        v = start
        on_path = set()
        while depth[v] < 0:
            if v in on_path:
                raise CycleDetected(f"vertex {v} lies on a parent cycle", vertex=v)
            on_path.add(v)
            path.append(v)
            v = parent_list[v]  # type: ignore[assignment]
        base = depth[v]
        for offset, vertex in enumerate(reversed(path), start=1):
            depth[vertex] = base + offset

    children: list[list[int]] = [[] for _ in range(n)]
    for v, p in enumerate(parent_list):
        if p is not None:
            children[p].append(v)
    return RootedTree(
        root=root,
        parent=tuple(parent_list),
        children=tuple(tuple(kids) for kids in children),
        depth=tuple(depth),
    )


def subtree_vertices(t: RootedTree, xi: int) -> frozenset[int]:
    """Vertices of ``A_xi``: every ``xi' >= xi``."""
    stack = [t.check_vertex(xi)]
    found = []
    while stack:
        v = stack.pop()
        found.append(v)
        stack.extend(t.children[v])
    return frozenset(found)


def path_to_root(t: RootedTree, xi: int) -> tuple[int, ...]:
    """The path ``[xi_0, xi]`` ordered root first."""
    v: Optional[int] = t.check_vertex(xi)
    path = []
    while v is not None:
        path.append(v)
        v = t.parent[v]
    return tuple(reversed(path))


def path_between(t: RootedTree, xi: int, eta: int) -> tuple[int, ...]:
    """The path ``[xi, eta]`` for ``xi <= eta``, ordered from ``xi``."""
    full = path_to_root(t, eta)
    depth = t.depth[t.check_vertex(xi)]
    if len(full) <= depth or full[depth] != xi:
        raise ValueError(f"vertex {xi} is not an ancestor of {eta}")
    return full[depth:]


def level_sets(t: RootedTree) -> list[frozenset[int]]:
    """Vertices of each depth ``j`` (the levels ``V_j(xi_0)``)."""
    return [frozenset(int(v) for v in level) for level in t.levels]


def maximal_vertices(t: RootedTree, vertex_set: AbstractSet[int]) -> frozenset[int]:
    """Members of ``vertex_set`` without a child in ``vertex_set``."""
    return frozenset(v for v in vertex_set if not any(c in vertex_set for c in t.children[v]))


def vertex_set_is_subtree(t: RootedTree, vertex_set: AbstractSet[int]) -> bool:
    """Whether the induced subgraph is connected with a unique minimal vertex."""
    if not vertex_set:
        return False
    minima = [v for v in vertex_set if t.parent[v] not in vertex_set]
    return len(minima) == 1


def vertex_vector(t: RootedTree, x: Iterable[float], name: str = "x") -> np.ndarray:
    arr = np.asarray(x, dtype=np.float64)
    if arr.shape != (t.n,):
        raise DimensionMismatch(f"{name} has shape {arr.shape}, tree has {t.n} vertices")
    return arr


def nonnegative_vector(t: RootedTree, x: Iterable[float], name: str = "x") -> np.ndarray:
    arr = vertex_vector(t, x, name)
    return check_nonnegative(arr, name)


def check_nonnegative(arr: np.ndarray, name: str = "x") -> np.ndarray:
    bad = np.flatnonzero(~np.isfinite(arr) | (arr < 0))
    if bad.size:
        raise NegativeEntry(name, int(bad[0]), float(arr[bad[0]]))
    return arr


def _check_exponent(r: float) -> None:
    if not 1 < r < np.inf:
        raise InvalidExponent(f"exponent must satisfy 1 < r < inf, got {r}")


def subtree_sums(t: RootedTree, x: Iterable[float]) -> np.ndarray:
    """``sum_{xi' >= xi} x(xi')`` for every ``xi`` (one bottom-up pass)."""
    acc = vertex_vector(t, x).copy()
    parent = t.parent_index
    for level in reversed(t.levels[1:]):
        np.add.at(acc, parent[level], acc[level])
    return acc


def path_sums(t: RootedTree, x: Iterable[float]) -> np.ndarray:
    """``sum_{xi_0 <= eta <= xi} x(eta)`` for every ``xi`` (one top-down pass)."""
    acc = vertex_vector(t, x).copy()
    parent = t.parent_index
    for level in t.levels[1:]:
        acc[level] += acc[parent[level]]
    return acc


def _scaled_powers(x: np.ndarray, scale: np.ndarray, r: float) -> np.ndarray:
    """``(x/scale)**r`` with ``0/0`` read as 0."""
    ratio = np.divide(x, scale, out=np.zeros_like(x), where=scale > 0)
    return ratio**r


def subtree_norms(t: RootedTree, x: Iterable[float], r: float) -> np.ndarray:
    """``||x||_{l_r(A_xi)}`` for every ``xi``.

    The r-th powers are accumulated relative to the subtree maximum, so large
    ``r`` or extreme weights neither overflow nor underflow.
    """
    _check_exponent(r)
    x = nonnegative_vector(t, x)
    parent = t.parent_index
    peak = x.copy()
    for level in reversed(t.levels[1:]):
        np.maximum.at(peak, parent[level], peak[level])
    acc = _scaled_powers(x, peak, r)
    for level in reversed(t.levels[1:]):
        up = parent[level]
        np.add.at(acc, up, acc[level] * _scaled_powers(peak[level], peak[up], r))
    return peak * acc ** (1.0 / r)


def path_norms(t: RootedTree, x: Iterable[float], r: float) -> np.ndarray:
    """``||x||_{l_r([xi_0, xi])}`` for every ``xi``, max-factored along the path."""
    _check_exponent(r)
    x = nonnegative_vector(t, x)
    parent = t.parent_index
    peak = x.copy()
    for level in t.levels[1:]:
        peak[level] = np.maximum(peak[level], peak[parent[level]])
    acc = _scaled_powers(x, peak, r)
    for level in t.levels[1:]:
        up = parent[level]
        acc[level] += acc[up] * _scaled_powers(peak[up], peak[level], r)
    return peak * acc ** (1.0 / r)


def lr_norm(x: Iterable[float], r: float) -> float:
    """``(sum |x|^r)^{1/r}`` with the maximum factored out."""
    _check_exponent(r)
    arr = np.abs(np.asarray(x, dtype=np.float64))
    if arr.size == 0:
        return 0.0
    peak = float(arr.max())
    if peak == 0.0:
        return 0.0
    return peak * float(np.sum((arr / peak) ** r)) ** (1.0 / r)
