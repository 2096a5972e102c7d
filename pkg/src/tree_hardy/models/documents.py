"""The tree+weights file format.

``{"root": <id>, "vertices": [{"id": int, "parent": int|null, "u": number, "w": number}, ...]}``
with dense ids from 0 and exactly one null parent.
"""

from typing import Optional

from pydantic import BaseModel, Field, model_validator


class VertexRecord(BaseModel):
    """One vertex of a tree file."""

    id: int = Field(..., ge=0, description="Vertex id")
    parent: Optional[int] = Field(..., description="Parent id, null for the root")
    u: float = Field(..., ge=0, allow_inf_nan=False, description="Inner weight")
    w: float = Field(..., ge=0, allow_inf_nan=False, description="Outer weight")


class TreeDocument(BaseModel):
    """A serialized tree with its weights."""

    root: int = Field(..., ge=0, description="Root vertex id")
    vertices: list[VertexRecord] = Field(..., min_length=1)

    @model_validator(mode="after")
    def _check_ids(self) -> "TreeDocument":
        ids = sorted(v.id for v in self.vertices)
        if ids != list(range(len(ids))):
            raise ValueError("vertex ids must be dense 0..n-1 without repeats")
        roots = [v.id for v in self.vertices if v.parent is None]
        if roots != [self.root]:
            raise ValueError(f"exactly one null parent expected at root {self.root}, found {roots}")
        return self
