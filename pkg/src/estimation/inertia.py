"""
Object-level estimates: pivot inertia from torque sweeps, then the center of mass and
central inertia from several pivots through the parallel axis theorem.
"""
import logging
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from src.errors import (
    DegenerateGeometryError,
    InconsistentSamplesError,
    InsufficientExcitationError,
    NonPhysicalInertiaError,
)
from src.models.particles import _frozen


logger = logging.getLogger(__name__)

COLLINEAR_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class PivotInertiaSample:
    """Moment of inertia about one pivot particle."""
    pivot_particle: int
    I_j: float
    residual: float
    pivot_position: Optional[np.ndarray] = None
    intercept: float = 0.0

    def __post_init__(self):
        if self.pivot_position is not None:
            object.__setattr__(
                self, "pivot_position", _frozen(np.asarray(self.pivot_position, dtype=float).reshape(2))
            )


def fit_pivot_inertia(
    samples: Sequence[Tuple[float, float]],
    friction_torque_offset: bool = True,
    pivot_particle: int = -1,
    pivot_position=None,
) -> PivotInertiaSample:
    """
    Fit a_w = u_w / I_j (+ intercept) by ordinary least squares.

    Args:
        samples: (u_w, a_w) pairs at two or more distinct torque levels
        friction_torque_offset: fit an intercept that absorbs constant friction torque
        pivot_particle: index of the pivot
        pivot_position: world position of the pivot

    Returns:
        PivotInertiaSample with I_j = 1 / slope and the RMS residual
    """
    data = np.asarray(samples, dtype=float).reshape(-1, 2)
    u, a = data[:, 0], data[:, 1]
    scale = max(1.0, float(np.max(np.abs(u)))) if len(u) else 1.0
    levels = np.unique(np.round(u / (scale * 1e-9)))
    if len(levels) < 2:
        raise InsufficientExcitationError(
            f"pivot {pivot_particle}: need at least 2 distinct torque levels, got {len(levels)}"
        )

    basis = np.column_stack([u, np.ones_like(u)]) if friction_torque_offset else u[:, None]
    coef, *_ = np.linalg.lstsq(basis, a, rcond=None)
    slope = float(coef[0])
    intercept = float(coef[1]) if friction_torque_offset else 0.0
    if slope <= 0:
        raise NonPhysicalInertiaError(f"pivot {pivot_particle}: non-positive slope {slope}")
    residual = float(np.sqrt(np.mean((basis @ coef - a) ** 2)))

    return PivotInertiaSample(
        pivot_particle=pivot_particle,
        I_j=1.0 / slope,
        residual=residual,
        pivot_position=pivot_position,
        intercept=intercept,
    )


def check_not_collinear(points: np.ndarray, tol: float = COLLINEAR_TOL) -> bool:
    """True when the points span the plane."""
    points = np.asarray(points, dtype=float).reshape(-1, 2)
    if len(points) < 3:
        return False
    sigma = np.linalg.svd(points - points.mean(axis=0), compute_uv=False)
    return bool(sigma[0] > 0 and sigma[-1] > tol * sigma[0])


def solve_com_inertia(
    samples: Sequence[PivotInertiaSample],
    M: float,
) -> Tuple[np.ndarray, float, float]:
    """
    Solve the parallel-axis relations for (c, I_cm).

    With alpha = I_cm + M |c|^2 each pivot gives the linear equation
    I_j - M |p_j|^2 = alpha - 2 M p_j . c.

    Returns:
        (c, I_cm, rms residual of the linear system)
    """
    positions = np.array([s.pivot_position for s in samples], dtype=float).reshape(-1, 2)
    inertias = np.array([s.I_j for s in samples], dtype=float)
    if len(samples) < 3 or not check_not_collinear(positions):
        raise DegenerateGeometryError(
            f"need at least 3 non-collinear pivots, got {len(samples)} "
            f"at {positions.tolist()}"
        )

    lhs = np.column_stack([np.ones(len(samples)), -2.0 * M * positions])
    rhs = inertias - M * np.einsum("ij,ij->i", positions, positions)
    solution, *_ = np.linalg.lstsq(lhs, rhs, rcond=None)
    alpha, c = solution[0], solution[1:]
    I_cm = float(alpha - M * (c @ c))
    residual = float(np.sqrt(np.mean((lhs @ solution - rhs) ** 2)))
    if I_cm <= 0:
        raise InconsistentSamplesError(f"pivot inertias imply non-positive I_cm = {I_cm}")

    logger.info(f"Center of mass {c.round(6).tolist()}, I_cm = {I_cm:.6g} (residual {residual:.3g})")
    return c, I_cm, residual
