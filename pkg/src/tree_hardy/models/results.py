"""Result types returned by the solvers, bounds and partition checks."""

from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field

from .tree import RootedTree


StartKind = Literal["certificate", "constant", "random", "supplied", "lp-maximizer"]


class StartLabel(BaseModel):
    """Which start produced an estimate."""

    model_config = ConfigDict(frozen=True)

    kind: StartKind = Field(..., description="Start family")
    index: int = Field(..., description="Position of the start in the solver's start list")
    vertex: Optional[int] = Field(None, description="Path end vertex for certificate starts")
    seed: Optional[int] = Field(None, description="Seed for random starts")


class NormEstimate(BaseModel):
    """A certified lower bound on an operator norm.

    ``value`` is the ratio recomputed from ``maximizer``; any nonnegative vector
    gives a true lower bound, so the estimate certifies itself.
    """

    model_config = ConfigDict(frozen=True)

    value: float = Field(..., ge=0, description="Best certified lower bound")
    maximizer: tuple[float, ...] = Field(..., description="Nonnegative maximizer with unit source norm")
    iterations: int = Field(..., ge=0, description="Total ascent iterations across starts")
    restarts_used: int = Field(..., ge=0, description="Number of starts run")
    converged: bool = Field(..., description="Whether the winning start met the tolerance")
    start_labels: StartLabel = Field(..., description="The start that won")
    regime: str = Field(..., description="Exponent regime: p<q, p=q or p>q")
    history: tuple[float, ...] = Field(default=(), description="Ratio sequence of the winning start")


class BoundReport(BaseModel):
    """A maximum of per-vertex (or per-level) products and where it is attained."""

    model_config = ConfigDict(frozen=True)

    value: float = Field(..., ge=0, description="The maximum")
    argmax_vertex: Optional[int] = Field(None, description="Smallest vertex id attaining the maximum")
    argmax_level: Optional[int] = Field(None, description="Smallest level attaining the maximum")
    per_vertex_terms: Optional[tuple[float, ...]] = Field(None, description="Products being maximized")


class Block(BaseModel):
    """One partition block ``A_m`` with its minimal vertex."""

    model_config = ConfigDict(frozen=True)

    root: int = Field(..., description="Minimal vertex of the block")
    vertices: tuple[int, ...] = Field(..., description="Block vertex ids, ascending")
    round: int = Field(..., ge=0, description="Construction round that carved the block")
    degenerate: bool = Field(False, description="Carved under the zero-norm singleton convention")


class SigmaPartition(BaseModel):
    """A sigma-partition of a tree and, once reduced, its reduced tree ``D``."""

    model_config = ConfigDict(frozen=True)

    sigma: float = Field(..., gt=0, lt=1)
    q: float = Field(..., gt=1)
    blocks: tuple[Block, ...] = Field(..., description="Blocks in construction order")
    membership: tuple[int, ...] = Field(..., description="Block index of every vertex")
    reduced: Optional[RootedTree] = Field(None, description="Reduced tree, one vertex per block")
    u_hat: Optional[tuple[float, ...]] = Field(None, description="Block p'-norms of u")
    w_hat: Optional[tuple[float, ...]] = Field(None, description="Block q-norms of w")
    p: Optional[float] = Field(None, description="Source exponent used for u_hat")

    @property
    def block_count(self) -> int:
        return len(self.blocks)

    @property
    def is_reduced(self) -> bool:
        return self.reduced is not None


class CheckResult(BaseModel):
    """Outcome of one named check."""

    model_config = ConfigDict(frozen=True)

    name: str = Field(..., description="Check identifier")
    passed: bool = Field(..., description="Whether every instance of the check held")
    measured: Optional[float] = Field(None, description="Worst measured value")
    bound: Optional[float] = Field(None, description="Value the measurement is compared with")
    detail: str = Field("", description="Human-readable explanation")
    skipped: bool = Field(False, description="Not evaluated on this instance")


class CheckReport(BaseModel):
    """A list of named checks."""

    model_config = ConfigDict(frozen=True)

    checks: tuple[CheckResult, ...] = Field(...)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks if not c.skipped)

    def get(self, name: str) -> CheckResult:
        for check in self.checks:
            if check.name == name:
                return check
        raise KeyError(name)
