"""Rooted trees, weight pairs and exponent pairs."""

import math
from functools import cached_property
from typing import Literal, Optional, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, computed_field, field_validator, model_validator

from .base import DimensionMismatch, InvalidExponent, InvalidTree, InvalidVertex


Regime = Literal["p<q", "p=q", "p>q"]


class RootedTree(BaseModel):
    """A finite rooted tree with parent links, children lists and depths.

    Vertex ids are dense integers ``0..n-1``. Use :func:`tree_hardy.tree.build_tree`
    to construct one from a parent list; the validator here only re-checks the
    cheap structural invariants.
    """

    model_config = ConfigDict(frozen=True)

    root: int = Field(..., ge=0, description="Root vertex id")
    parent: tuple[Optional[int], ...] = Field(..., description="Parent of each vertex, None for the root")
    children: tuple[tuple[int, ...], ...] = Field(..., description="Children of each vertex, ascending")
    depth: tuple[int, ...] = Field(..., description="Distance of each vertex to the root")

    @model_validator(mode="after")
    def _check_links(self) -> "RootedTree":
        n = len(self.parent)
        if len(self.children) != n or len(self.depth) != n:
            raise InvalidTree("parent, children and depth must have equal length")
        if self.parent[self.root] is not None or self.depth[self.root] != 0:
            raise InvalidTree("root must have no parent and depth 0", vertex=self.root)
        for v, kids in enumerate(self.children):
            for c in kids:
                if self.parent[c] != v or self.depth[c] != self.depth[v] + 1:
                    raise InvalidTree(f"edge {v}->{c} is inconsistent", vertex=c)
        if sum(len(kids) for kids in self.children) != n - 1:
            raise InvalidTree("children lists do not cover every non-root vertex")
        return self

    @property
    def n(self) -> int:
        """Vertex count."""
        return len(self.parent)

    @property
    def height(self) -> int:
        """Largest depth in the tree."""
        return max(self.depth)

    @cached_property
    def parent_index(self) -> np.ndarray:
        """Parent ids as an int array, -1 at the root."""
        return np.array([-1 if p is None else p for p in self.parent], dtype=np.int64)

    @cached_property
    def levels(self) -> tuple[np.ndarray, ...]:
        """Vertex ids grouped by depth, each level in ascending id order."""
        depth = np.asarray(self.depth, dtype=np.int64)
        order = np.argsort(depth, kind="stable")
        counts = np.bincount(depth)
        return tuple(np.split(order, np.cumsum(counts)[:-1]))

    @cached_property
    def level_index(self) -> np.ndarray:
        """Depth of each vertex as an int array."""
        return np.asarray(self.depth, dtype=np.int64)

    def check_vertex(self, vertex: int) -> int:
        """Return ``vertex`` if it is a valid id, else raise InvalidVertex."""
        if not 0 <= int(vertex) < self.n:
            raise InvalidVertex(int(vertex), self.n)
        return int(vertex)

    def is_ancestor(self, a: int, b: int) -> bool:
        """Whether ``a <= b`` in the tree order (``a`` lies on the root path of ``b``)."""
        self.check_vertex(a)
        self.check_vertex(b)
        while self.depth[b] > self.depth[a]:
            b = self.parent[b]  # type: ignore[assignment]
        return a == b


class WeightPair(BaseModel):
    """Nonnegative finite vertex weights ``u`` and ``w``."""

    model_config = ConfigDict(frozen=True)

    u: tuple[float, ...] = Field(..., description="Inner weight u(xi)")
    w: tuple[float, ...] = Field(..., description="Outer weight w(xi)")

    @field_validator("u", "w")
    @classmethod
    def _check_entries(cls, v: tuple[float, ...]) -> tuple[float, ...]:
        for i, x in enumerate(v):
            if not math.isfinite(x) or x < 0:
                raise ValueError(f"weight at vertex {i} must be finite and >= 0, got {x}")
        return v

    @model_validator(mode="after")
    def _check_lengths(self) -> "WeightPair":
        if len(self.u) != len(self.w):
            raise DimensionMismatch(f"u has {len(self.u)} entries but w has {len(self.w)}")
        return self

    @classmethod
    def for_tree(cls, tree: RootedTree, u: Sequence[float], w: Sequence[float]) -> "WeightPair":
        """Build a weight pair and check it matches ``tree``."""
        if len(u) != tree.n or len(w) != tree.n:
            raise DimensionMismatch(f"tree has {tree.n} vertices, got |u|={len(u)}, |w|={len(w)}")
        return cls(u=tuple(float(x) for x in u), w=tuple(float(x) for x in w))

    @cached_property
    def u_array(self) -> np.ndarray:
        return np.asarray(self.u, dtype=np.float64)

    @cached_property
    def w_array(self) -> np.ndarray:
        return np.asarray(self.w, dtype=np.float64)

    def scaled(self, alpha: float, beta: float) -> "WeightPair":
        """Return ``(alpha*u, beta*w)``."""
        return WeightPair(u=tuple(alpha * x for x in self.u), w=tuple(beta * x for x in self.w))


class Exponents(BaseModel):
    """Source and target exponents ``(p, q)`` with their duals."""

    model_config = ConfigDict(frozen=True)

    p: float = Field(..., description="Source exponent")
    q: float = Field(..., description="Target exponent")

    @field_validator("p", "q")
    @classmethod
    def _check_range(cls, v: float) -> float:
        if not (1 < v < math.inf):
            raise InvalidExponent(f"exponents must satisfy 1 < r < inf, got {v}")
        return v

    @computed_field  # type: ignore[prop-decorator]
    @property
    def p_prime(self) -> float:
        return self.p / (self.p - 1)

    @computed_field  # type: ignore[prop-decorator]
    @property
    def q_prime(self) -> float:
        return self.q / (self.q - 1)

    @property
    def regime(self) -> Regime:
        if self.p < self.q:
            return "p<q"
        if self.p == self.q:
            return "p=q"
        return "p>q"

    @classmethod
    def for_theorem(cls, p: float, q: float, *, strict: bool = True) -> "Exponents":
        """Exponents for the two-sided estimates.

        ``strict=True`` demands ``p < q`` (tree estimates); ``strict=False``
        accepts ``p <= q`` (the chain criterion).
        """
        e = cls(p=p, q=q)
        if strict and e.regime != "p<q":
            raise InvalidExponent(f"this estimate needs p < q, got p={p}, q={q}")
        if not strict and e.regime == "p>q":
            raise InvalidExponent(f"this estimate needs p <= q, got p={p}, q={q}")
        return e
