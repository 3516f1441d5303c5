"""
Particle models obtained by grid partition of an object's footprint.
"""
from dataclasses import dataclass
from typing import Optional

import numpy as np

from src.errors import InvalidShapeError


def _frozen(array: np.ndarray) -> np.ndarray:
    array = np.array(array, copy=True)
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class ParticleModel:
    """
    Body-frame particle positions on a regular grid.

    Attributes:
        positions: (n_p, 2) cell centers in meters, relative to the model origin
        spacing: grid pitch in meters
        contact_mask: (n_p,) particles touching the table
        graspable_mask: (n_p,) particles the gripper may hold
        cells: (n_p, 2) integer (row, col) of each particle in its source grid
    """
    positions: np.ndarray
    spacing: float
    contact_mask: np.ndarray
    graspable_mask: np.ndarray
    cells: Optional[np.ndarray] = None

    def __post_init__(self):
        positions = np.asarray(self.positions, dtype=float)
        if positions.ndim != 2 or positions.shape[1] != 2:
            raise InvalidShapeError(f"positions must be (n, 2), got {positions.shape}")
        n = positions.shape[0]
        if n < 2:
            raise InvalidShapeError(f"a particle model needs at least 2 particles, got {n}")
        if self.spacing <= 0:
            raise InvalidShapeError(f"spacing must be positive, got {self.spacing}")

        steps = positions / self.spacing
        if np.any(np.abs(steps - np.round(steps)) * self.spacing > 1e-12):
            raise InvalidShapeError("positions must lie on the grid")
        if len({tuple(k) for k in np.round(steps).astype(int)}) != n:
            raise InvalidShapeError("particle positions must be distinct")

        contact = np.asarray(self.contact_mask, dtype=bool)
        graspable = np.asarray(self.graspable_mask, dtype=bool)
        if contact.shape != (n,) or graspable.shape != (n,):
            raise InvalidShapeError("contact and graspable masks must have one entry per particle")

        cells = self.cells
        if cells is None:
            cells = np.round(steps[:, ::-1]).astype(int)

        object.__setattr__(self, "positions", _frozen(positions))
        object.__setattr__(self, "contact_mask", _frozen(contact))
        object.__setattr__(self, "graspable_mask", _frozen(graspable))
        object.__setattr__(self, "cells", _frozen(np.asarray(cells, dtype=int)))

    @property
    def n_p(self) -> int:
        return int(self.positions.shape[0])

    @property
    def graspable_indices(self) -> np.ndarray:
        return np.flatnonzero(self.graspable_mask)

    @property
    def contact_indices(self) -> np.ndarray:
        return np.flatnonzero(self.contact_mask)

    @property
    def centroid(self) -> np.ndarray:
        return self.positions.mean(axis=0)


def build_grid_model(
    mask,
    spacing: float,
    contact=None,
    graspable=None,
) -> ParticleModel:
    """
    Build a particle model from a 2D occupancy grid.

    Cell (row, col) maps to x = col * spacing, y = row * spacing, shifted so the first
    occupied cell in row-major order is the origin.

    Args:
        mask: 2D boolean occupancy grid
        spacing: grid pitch in meters
        contact: 2D boolean grid of table contact (defaults to every occupied cell)
        graspable: 2D boolean grid of graspable cells (defaults to every occupied cell)

    Returns:
        ParticleModel with one particle per occupied cell
    """
    mask = np.asarray(mask, dtype=bool)
    if mask.ndim != 2:
        raise InvalidShapeError(f"mask must be a 2D grid, got {mask.ndim} dimensions")
    contact = mask if contact is None else np.asarray(contact, dtype=bool)
    graspable = mask if graspable is None else np.asarray(graspable, dtype=bool)
    if contact.shape != mask.shape or graspable.shape != mask.shape:
        raise InvalidShapeError("contact and graspable grids must match the mask shape")

    cells = np.argwhere(mask)
    if len(cells) < 2:
        raise InvalidShapeError(f"mask must have at least 2 occupied cells, got {len(cells)}")

    origin = cells[0]
    offsets = cells - origin
    positions = offsets[:, ::-1].astype(float) * spacing

    return ParticleModel(
        positions=positions,
        spacing=float(spacing),
        contact_mask=contact[mask],
        graspable_mask=graspable[mask],
        cells=cells,
    )
