"""Level profiles and level-constant weights for regular trees."""

from functools import cached_property

from pydantic import BaseModel, ConfigDict, Field, computed_field, field_validator, model_validator

from .base import DepthMismatch


class LevelProfile(BaseModel):
    """Branching sequence ``b_0..b_{D-1}`` of an exactly regular tree.

    Every vertex at level ``j`` has ``b_j`` children, so the level counts are
    ``S(0) = 1`` and ``S(j+1) = S(j) * b_j`` and the regularity constant is
    ``C* = 1``.
    """

    model_config = ConfigDict(frozen=True)

    branching: tuple[int, ...] = Field(..., description="Children per vertex at each level")

    @field_validator("branching")
    @classmethod
    def _check_branching(cls, v: tuple[int, ...]) -> tuple[int, ...]:
        for j, b in enumerate(v):
            if b < 2:
                raise ValueError(f"branching at level {j} must be an integer >= 2, got {b}")
        return v

    @property
    def depth(self) -> int:
        """Deepest level index ``D``."""
        return len(self.branching)

    @computed_field  # type: ignore[prop-decorator]
    @cached_property
    def S(self) -> tuple[float, ...]:
        """Level counts ``S(0..D)``."""
        counts = [1.0]
        for b in self.branching:
            counts.append(counts[-1] * b)
        return tuple(counts)

    @computed_field  # type: ignore[prop-decorator]
    @property
    def R(self) -> float:
        """Smallest growth ratio ``S(j+1)/S(j)`` (2 for a single level)."""
        return float(min(self.branching)) if self.branching else 2.0

    @computed_field  # type: ignore[prop-decorator]
    @property
    def R0(self) -> float:
        """Largest growth ratio ``S(j+1)/S(j)``."""
        return float(max(self.branching)) if self.branching else 2.0

    @computed_field  # type: ignore[prop-decorator]
    @property
    def Cstar(self) -> float:
        return 1.0

    @property
    def vertex_count(self) -> int:
        return int(sum(self.S))


class LevelWeights(BaseModel):
    """Weights constant on each level: ``u(xi) = u_j``, ``w(xi) = w_j``."""

    model_config = ConfigDict(frozen=True)

    u_levels: tuple[float, ...] = Field(..., description="u_0..u_D")
    w_levels: tuple[float, ...] = Field(..., description="w_0..w_D")

    @field_validator("u_levels", "w_levels")
    @classmethod
    def _check_nonnegative(cls, v: tuple[float, ...]) -> tuple[float, ...]:
        if any(not x >= 0 or x == float("inf") for x in v):
            raise ValueError("level weights must be finite and >= 0")
        return v

    @property
    def depth(self) -> int:
        return len(self.u_levels) - 1

    @model_validator(mode="after")
    def _check_lengths(self) -> "LevelWeights":
        if len(self.u_levels) != len(self.w_levels) or not self.u_levels:
            raise DepthMismatch(
                f"u_levels has {len(self.u_levels)} entries, w_levels has {len(self.w_levels)}"
            )
        return self
