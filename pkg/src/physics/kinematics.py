"""
Planar rigid-body kinematics.

Headings are measured clockwise: R(theta) = [[cos, sin], [-sin, cos]]. For a scalar
rate w and lever r, w (x) r = w * perp(r) with perp(r) = (r_y, -r_x); for two vectors
a (x) b = a_x b_y - a_y b_x. Under this convention the torque of a force f at lever r
is cross(f, r) and the velocity of a body point is v + w * perp(r).
"""
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from src.models.particles import ParticleModel, _frozen


def rotation(theta) -> np.ndarray:
    """Rotation matrix (or stack of them) for clockwise heading theta."""
    cos, sin = np.cos(theta), np.sin(theta)
    return np.array([[cos, sin], [-sin, cos]]) if np.ndim(theta) == 0 else np.stack(
        [np.stack([cos, sin], axis=-1), np.stack([-sin, cos], axis=-1)], axis=-2
    )


def cross(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a[..., 0] * b[..., 1] - a[..., 1] * b[..., 0]


def perp(x: np.ndarray) -> np.ndarray:
    return np.stack([x[..., 1], -x[..., 0]], axis=-1)


@dataclass(frozen=True, eq=False)
class ObjectState:
    """Pose [p_x, p_y, p_w] and velocity [v_x, v_y, v_w] of the pose reference point."""
    pose: np.ndarray
    velocity: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "pose", _frozen(np.asarray(self.pose, dtype=float).reshape(3)))
        object.__setattr__(self, "velocity", _frozen(np.asarray(self.velocity, dtype=float).reshape(3)))

    @classmethod
    def at_rest(cls, pose=(0.0, 0.0, 0.0)) -> "ObjectState":
        return cls(np.asarray(pose, dtype=float), np.zeros(3))

    def is_finite(self) -> bool:
        return bool(np.all(np.isfinite(self.pose)) and np.all(np.isfinite(self.velocity)))


@dataclass(frozen=True, eq=False)
class WrenchInput:
    """Force/torque [u_x, u_y, u_w] applied at a single grasped particle."""
    particle_index: int
    u: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "particle_index", int(self.particle_index))
        object.__setattr__(self, "u", _frozen(np.asarray(self.u, dtype=float).reshape(3)))


def world_positions(model: ParticleModel, pose: np.ndarray, reference: int = 0) -> np.ndarray:
    """World particle positions; the pose translation is the reference particle's position."""
    body = model.positions - model.positions[reference]
    return body @ rotation(pose[2]).T + pose[:2]


def body_to_world(point: np.ndarray, model: ParticleModel, pose: np.ndarray, reference: int = 0) -> np.ndarray:
    return rotation(pose[2]) @ (np.asarray(point, dtype=float) - model.positions[reference]) + pose[:2]


def world_kinematics(
    model: ParticleModel,
    state: ObjectState,
    reference: int = 0,
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Per-particle world positions and velocities.

    Args:
        model: particle model
        state: pose/velocity of the reference particle
        reference: index of the particle the pose tracks (0 is the body origin)

    Returns:
        (positions, velocities), each (n_p, 2)
    """
    positions = world_positions(model, state.pose, reference)
    levers = positions - positions[reference]
    velocities = state.velocity[:2] + state.velocity[2] * perp(levers)
    return positions, velocities
