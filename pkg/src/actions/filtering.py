"""
Pre-processing of observed data using the known structure of each action.

Slides produce a constant wrench. Rotations produce a constant torque and a force that
turns with the body, i.e. a sinusoid in the commanded heading increment.
"""
import logging
from typing import Optional

import numpy as np

from src.actions.spec import ActionSpec
from src.actions.trajectories import rotation_angles
from src.config import SimConfig
from src.errors import InsufficientDataError
from src.physics.trajectory import Trajectory


logger = logging.getLogger(__name__)

MIN_SAMPLES = 3


def _fit(basis: np.ndarray, values: np.ndarray) -> np.ndarray:
    """Least-squares projection of each column of `values` onto span(basis)."""
    coef, *_ = np.linalg.lstsq(basis, values, rcond=None)
    return basis @ coef


def filter_feedback(
    raw: np.ndarray,
    action: ActionSpec,
    config: Optional[SimConfig] = None,
) -> np.ndarray:
    """
    Filter a (T, 3) wrench series.

    Args:
        raw: measured [u_x, u_y, u_w] per step
        action: the action that produced the series
        config: simulation config (dt fixes the heading increments of rotations)

    Returns:
        Filtered (T, 3) series
    """
    config = config or SimConfig()
    raw = np.asarray(raw, dtype=float).reshape(-1, 3)
    T = len(raw)
    if T < MIN_SAMPLES:
        raise InsufficientDataError(f"need at least {MIN_SAMPLES} samples to filter, got {T}")

    ones = np.ones((T, 1))
    if not action.is_rotate:
        return _fit(ones, raw)

    phi = rotation_angles(action, T, config.dt)[:T]
    sinusoid = np.column_stack([ones[:, 0], np.cos(phi), np.sin(phi)])
    filtered = np.empty_like(raw)
    filtered[:, :2] = _fit(sinusoid, raw[:, :2])
    filtered[:, 2] = _fit(ones, raw[:, 2:])[:, 0]
    return filtered


def smooth_trajectory(traj: Trajectory, action: ActionSpec) -> Trajectory:
    """
    Fit observed poses to the action's motion model and rebuild Euler-consistent states.

    Slides: straight line at constant velocity with constant heading. Rotations: fixed
    pivot (mean observed position) and heading quadratic in the step index, with the
    quadratic term only when the action commands an angular acceleration.
    Noiseless kinematic trajectories are returned unchanged up to rounding.
    """
    poses = traj.poses
    steps = traj.n_steps
    if steps + 1 < MIN_SAMPLES:
        raise InsufficientDataError(f"need at least {MIN_SAMPLES} poses to smooth, got {steps + 1}")
    dt = traj.dt
    t = np.arange(steps + 1, dtype=float)
    velocities = np.zeros((steps + 1, 3))

    if action.is_rotate:
        columns = [np.ones_like(t), t * dt]
        if action.angular_accel != 0.0:
            columns.append(dt * dt * t * (t - 1) / 2.0)
        basis = np.column_stack(columns)
        coef, *_ = np.linalg.lstsq(basis, poses[:, 2], rcond=None)
        theta0, rate = coef[0], coef[1]
        accel = coef[2] if len(coef) > 2 else 0.0
        smoothed = np.empty_like(poses)
        smoothed[:, :2] = poses[:, :2].mean(axis=0)
        smoothed[:, 2] = theta0 + rate * t * dt + accel * dt * dt * t * (t - 1) / 2.0
        velocities[:, 2] = rate + accel * t * dt
    else:
        basis = np.column_stack([np.ones_like(t), t * dt])
        coef, *_ = np.linalg.lstsq(basis, poses[:, :2], rcond=None)
        smoothed = np.empty_like(poses)
        smoothed[:, :2] = basis @ coef
        smoothed[:, 2] = poses[:, 2].mean()
        velocities[:, :2] = coef[1]

    return traj.with_states(smoothed, velocities)


def fitted_angular_accel(traj: Trajectory) -> float:
    """Mean angular acceleration of a (smoothed) trajectory."""
    return float(np.mean(np.diff(traj.velocities[:, 2])) / traj.dt)
