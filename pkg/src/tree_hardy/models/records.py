"""Experiment records and summaries."""

from typing import Optional

from pydantic import BaseModel, Field


CSV_COLUMNS = (
    "instance_id",
    "n",
    "p",
    "q",
    "M",
    "norm_lb",
    "ratio",
    "restarts",
    "iters",
    "converged",
    "block_count",
    "max_vmax_card",
    "wall_ms",
)


class PartitionStats(BaseModel):
    """Partition statistics of one instance at one sigma."""

    sigma: float
    block_count: int
    max_vmax_card: int
    min_succession_ratio: Optional[float] = None
    max_succession_ratio: Optional[float] = None


class ExperimentRecord(BaseModel):
    """One row of a ratio study: an instance evaluated at one ``(p, q)``."""

    instance_id: int = Field(..., ge=0)
    ensemble: str = Field("", description="Ensemble kind the instance came from")
    n: int = Field(..., ge=0, description="Vertex count; 0 when the shape gave none")
    p: float
    q: float
    M: Optional[float] = Field(None, description="Tree bound quantity")
    norm_lb: Optional[float] = Field(None, description="Certified lower bound on the l_p -> l_q norm")
    ratio: Optional[float] = Field(None, description="norm_lb / M")
    restarts: Optional[int] = None
    iters: Optional[int] = None
    converged: Optional[bool] = None
    block_count: Optional[int] = None
    max_vmax_card: Optional[int] = None
    wall_ms: float = 0.0
    mixed_norm_lb: Optional[float] = None
    theorem2_value: Optional[float] = None
    theorem2_vertex_value: Optional[float] = None
    mixed_ratio: Optional[float] = Field(None, description="mixed_norm_lb / theorem2 quantity")
    partitions: list[PartitionStats] = Field(default_factory=list)
    error: Optional[str] = None

    @property
    def sort_key(self) -> tuple[int, float, float]:
        return (self.instance_id, self.p, self.q)


class RatioSummary(BaseModel):
    """Ratio statistics for one exponent pair."""

    p: float
    q: float
    count: int
    min_ratio: Optional[float] = None
    median_ratio: Optional[float] = None
    max_ratio: Optional[float] = None
    min_mixed_ratio: Optional[float] = None
    max_mixed_ratio: Optional[float] = None
    failures: int = 0


class ExperimentResult(BaseModel):
    """Every record of a run plus its summary block."""

    records: list[ExperimentRecord]
    summary: list[RatioSummary]
