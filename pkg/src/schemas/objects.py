"""
Object descriptor schema.
Grids are row-major lists of rows; group grids use -1 for cells without a group.
"""
from typing import List, Optional

from pydantic import Field, model_validator

from src.schemas.base import BaseSchema


Grid = List[List[int]]


class ObjectDescriptor(BaseSchema):
    """JSON description of a grid object and its ground-truth parameters."""

    name: str = ""
    spacing: float = Field(gt=0)
    occupancy: Grid
    contact: Grid
    graspable: Grid
    mass_groups: Grid
    friction_groups: Grid
    contact_groups: Optional[Grid] = None
    masses: List[float]
    mus: List[float]
    truth_known: bool = True

    @model_validator(mode="after")
    def _check_shapes(self) -> "ObjectDescriptor":
        rows = len(self.occupancy)
        cols = len(self.occupancy[0]) if rows else 0
        grids = {
            "contact": self.contact,
            "graspable": self.graspable,
            "mass_groups": self.mass_groups,
            "friction_groups": self.friction_groups,
        }
        if self.contact_groups is not None:
            grids["contact_groups"] = self.contact_groups
        for name, grid in {"occupancy": self.occupancy, **grids}.items():
            if len(grid) != rows or any(len(row) != cols for row in grid):
                raise ValueError(f"{name} grid must be {rows}x{cols}")
        return self


class CatalogFile(BaseSchema):
    """The built-in object catalog."""

    objects: List[ObjectDescriptor]
