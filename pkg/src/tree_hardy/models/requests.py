"""Request models: weight laws, tree models, solver options and experiment configs."""

from pathlib import Path
from typing import Annotated, Any, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from ..config import get_settings
from .base import InvalidLaw


class ConstantLaw(BaseModel):
    """x(xi) = c."""

    kind: Literal["constant"] = "constant"
    c: float = Field(..., ge=0, allow_inf_nan=False, description="Constant value")


class GeometricLaw(BaseModel):
    """x(xi) = rho ** depth(xi)."""

    kind: Literal["geometric"] = "geometric"
    rho: float = Field(..., gt=0, allow_inf_nan=False, description="Ratio per level")


class LogUniformLaw(BaseModel):
    """x(xi) i.i.d. with log x uniform on [log lo, log hi]."""

    kind: Literal["loguniform"] = "loguniform"
    lo: float = Field(..., gt=0, allow_inf_nan=False)
    hi: float = Field(..., gt=0, allow_inf_nan=False)

    @model_validator(mode="after")
    def _check_order(self) -> "LogUniformLaw":
        if self.lo > self.hi:
            raise ValueError(f"loguniform needs lo <= hi, got lo={self.lo}, hi={self.hi}")
        return self


class LevelsLaw(BaseModel):
    """x(xi) = levels[depth(xi)]."""

    kind: Literal["levels"] = "levels"
    levels: tuple[float, ...] = Field(..., min_length=1, description="Value per depth")

    @field_validator("levels")
    @classmethod
    def _check_levels(cls, v: tuple[float, ...]) -> tuple[float, ...]:
        if any(not 0 <= x < float("inf") for x in v):
            raise ValueError("level values must be finite and >= 0")
        return v


WeightLaw = Annotated[
    Union[ConstantLaw, GeometricLaw, LogUniformLaw, LevelsLaw],
    Field(discriminator="kind"),
]


def parse_weight_law(text: str) -> Union[ConstantLaw, GeometricLaw, LogUniformLaw, LevelsLaw]:
    """Parse ``constant:c``, ``geometric:rho``, ``loguniform:lo:hi`` or ``levels:a,b,...``."""
    kind, _, rest = text.strip().partition(":")
    try:
        if kind == "constant":
            return ConstantLaw(c=float(rest))
        if kind == "geometric":
            return GeometricLaw(rho=float(rest))
        if kind == "loguniform":
            lo, hi = rest.split(":")
            return LogUniformLaw(lo=float(lo), hi=float(hi))
        if kind == "levels":
            return LevelsLaw(levels=tuple(float(x) for x in rest.split(",")))
    except (ValueError, ValidationError) as e:
        raise InvalidLaw(f"bad weight law {text!r}: {e}") from e
    raise InvalidLaw(f"unknown weight law {kind!r} in {text!r}")


class UniformAttachment(BaseModel):
    """Each new vertex picks its parent uniformly among existing vertices."""

    kind: Literal["uniform-attachment"] = "uniform-attachment"


class BoundedBranching(BaseModel):
    """Uniform attachment restricted to parents with fewer than ``max_children`` children."""

    kind: Literal["bounded-branching"] = "bounded-branching"
    max_children: int = Field(..., ge=0)


RandomTreeModel = Annotated[
    Union[UniformAttachment, BoundedBranching],
    Field(discriminator="kind"),
]


class SolverOptions(BaseModel):
    """Options shared by the operator-norm solvers."""

    model_config = ConfigDict(frozen=True)

    restarts: int = Field(default_factory=lambda: get_settings().restarts, ge=0)
    max_iter: int = Field(default_factory=lambda: get_settings().max_iter, ge=1)
    tol: float = Field(default_factory=lambda: get_settings().tol, gt=0)
    include_certificate_starts: bool = Field(
        default_factory=lambda: get_settings().include_certificate_starts
    )
    seed: int = Field(0, description="Master seed of the random starts")
    extra_starts: tuple[tuple[float, ...], ...] = Field(
        default=(), description="Caller-supplied nonnegative start vectors"
    )


class ChainEnsemble(BaseModel):
    kind: Literal["chain"] = "chain"
    sizes: list[int] = Field(..., min_length=1)


class StarEnsemble(BaseModel):
    kind: Literal["star"] = "star"
    sizes: list[int] = Field(..., min_length=1, description="Leaf counts m")


class RegularEnsemble(BaseModel):
    kind: Literal["regular"] = "regular"
    branchings: list[tuple[int, ...]] = Field(..., min_length=1)


class RandomEnsemble(BaseModel):
    kind: Literal["random"] = "random"
    sizes: list[int] = Field(..., min_length=1)
    model: RandomTreeModel = Field(default_factory=UniformAttachment)


TreeEnsemble = Annotated[
    Union[ChainEnsemble, StarEnsemble, RegularEnsemble, RandomEnsemble],
    Field(discriminator="kind"),
]


class EnsembleSpec(BaseModel):
    """A family of instances: tree shapes times ``count`` weight draws."""

    tree: TreeEnsemble
    count: int = Field(1, ge=1, description="Instances per size")
    u: WeightLaw = Field(default_factory=lambda: ConstantLaw(c=1.0))
    w: WeightLaw = Field(default_factory=lambda: ConstantLaw(c=1.0))

    @field_validator("u", "w", mode="before")
    @classmethod
    def _parse_text_law(cls, v: Any) -> Any:
        return parse_weight_law(v) if isinstance(v, str) else v


class ExperimentConfig(BaseModel):
    """A batch of ratio studies."""

    ensembles: list[EnsembleSpec] = Field(..., min_length=1)
    exponents: list[tuple[float, float]] = Field(..., min_length=1, description="(p, q) pairs with 1 < p < q")
    solver: SolverOptions = Field(default_factory=SolverOptions)
    sigmas: list[float] = Field(default_factory=lambda: [get_settings().sigma], min_length=1)
    seed: int = Field(0, description="Master seed; per-instance seeds derive from it")
    mixed: bool = Field(True, description="Also estimate mixed norms on regular ensembles")
    output: Optional[Path] = Field(None, description="Results path; standard output when absent")
    format: Literal["csv", "json"] = "csv"

    @field_validator("exponents")
    @classmethod
    def _check_exponents(cls, v: list[tuple[float, float]]) -> list[tuple[float, float]]:
        for p, q in v:
            if not 1 < p < q < float("inf"):
                raise ValueError(f"every exponent pair needs 1 < p < q < inf, got ({p}, {q})")
        return v

    @field_validator("sigmas")
    @classmethod
    def _check_sigmas(cls, v: list[float]) -> list[float]:
        for s in v:
            if not 0 < s < 1:
                raise ValueError(f"sigma must lie in (0, 1), got {s}")
        return v
