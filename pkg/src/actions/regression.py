"""
Linear regression model of the velocity update in the friction magnitudes s.

For one step, v_{t+1} = v_t + A s + B, where A folds each contact group's friction
direction and torque lever through the inverse mass matrix and B carries the applied
wrench. The Q matrix stacks one wrench-frame block per action; s is identifiable from
an action set exactly when Q has full column rank.
"""
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from src.actions.spec import ActionSpec
from src.actions.trajectories import kinematic_trajectory
from src.config import SimConfig
from src.models.groups import GroupMaps
from src.models.particles import ParticleModel
from src.physics.dynamics import friction_directions
from src.physics.kinematics import (
    ObjectState,
    WrenchInput,
    body_to_world,
    cross,
    perp,
    world_kinematics,
)
from src.physics.trajectory import Trajectory


@dataclass(frozen=True, eq=False)
class RegressionBlock:
    """A (3, n_s) maps s to the velocity change; B (3,) is the input contribution."""
    A: np.ndarray
    B: np.ndarray


def _inverse_mass(M: float, I_cm: float) -> np.ndarray:
    return np.array([1.0 / M, 1.0 / M, 1.0 / I_cm])


def particle_columns(
    state: ObjectState,
    model: ParticleModel,
    c_world: np.ndarray,
    config: SimConfig,
    reference: int,
) -> np.ndarray:
    """Pre-folding (3, n_p) columns [dhat_x, dhat_y, cross(dhat_i, r_i)] per particle."""
    positions, velocities = world_kinematics(model, state, reference)
    dhat = friction_directions(velocities, config.velocity_epsilon)
    levers = positions - c_world
    return np.vstack([dhat[:, 0], dhat[:, 1], cross(dhat, levers)])


def wrench_block(
    state: ObjectState,
    input: WrenchInput,
    model: ParticleModel,
    maps: GroupMaps,
    M: float,
    I_cm: float,
    c: np.ndarray,
    config: SimConfig,
    reference: int = 0,
) -> RegressionBlock:
    """Regression block for the center-of-mass velocity update."""
    c_world = body_to_world(c, model, state.pose, reference)
    minv = _inverse_mass(M, I_cm)
    columns = particle_columns(state, model, c_world, config, reference)
    A = -config.dt * minv[:, None] * (columns @ maps.G_s.T)

    positions = world_kinematics(model, state, reference)[0]
    u = input.u
    torque = u[2] + cross(u[:2], positions[input.particle_index] - c_world)
    B = config.dt * minv * np.array([u[0], u[1], torque])
    return RegressionBlock(A=A, B=B)


def regression_block(
    state: ObjectState,
    input: WrenchInput,
    model: ParticleModel,
    maps: GroupMaps,
    M: float,
    I_cm: float,
    c: np.ndarray,
    config: SimConfig,
    reference: int = 0,
) -> RegressionBlock:
    """
    Regression block for the update of the state's own velocity.

    Applies the rigid transfer from the center of mass to the pose reference, so that
    v_{t+1} = v_t + A s + B holds exactly for steps produced by simulate.
    """
    block = wrench_block(state, input, model, maps, M, I_cm, c, config, reference)
    d = state.pose[:2] - body_to_world(c, model, state.pose, reference)
    lever = perp(d)
    transfer = np.array([[1.0, 0.0, lever[0]], [0.0, 1.0, lever[1]], [0.0, 0.0, 1.0]])
    w = state.velocity[2]
    B = transfer @ block.B
    B[:2] -= config.dt * w * w * d
    return RegressionBlock(A=transfer @ block.A, B=B)


def regression_blocks(
    trajectories: Sequence[Trajectory],
    model: ParticleModel,
    maps: GroupMaps,
    M: float,
    I_cm: float,
    c: np.ndarray,
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Stack blocks and observed velocity changes over every step of every trajectory.

    Returns:
        (A (3N, n_s), B (3N,), deltas (3N,))
    """
    As: List[np.ndarray] = []
    Bs: List[np.ndarray] = []
    deltas: List[np.ndarray] = []
    for traj in trajectories:
        observed = traj.velocity_deltas()
        for t in range(traj.n_steps):
            block = regression_block(
                traj.state(t), traj.input(t), model, maps, M, I_cm, c, traj.config, traj.reference
            )
            As.append(block.A)
            Bs.append(block.B)
            deltas.append(observed[t])
    if not As:
        return np.zeros((0, maps.n_s)), np.zeros(0), np.zeros(0)
    return np.vstack(As), np.concatenate(Bs), np.concatenate(deltas)


def build_Q(
    actions: Sequence[ActionSpec],
    model: ParticleModel,
    maps: GroupMaps,
    M: float,
    c: np.ndarray,
    I_cm: float = 1.0,
    config: Optional[SimConfig] = None,
) -> np.ndarray:
    """
    Stack one wrench-frame A block per action, evaluated mid-trajectory.

    Returns:
        Q of shape (3k, n_s). Its rank does not depend on I_cm or on s.
    """
    config = config or SimConfig()
    blocks = []
    for action in actions:
        traj = kinematic_trajectory(action, model, config=config)
        mid = traj.n_steps // 2
        block = wrench_block(
            traj.state(mid), traj.input(mid), model, maps, M, I_cm, c, config, traj.reference
        )
        blocks.append(block.A)
    if not blocks:
        return np.zeros((0, maps.n_s))
    return np.vstack(blocks)


def rank_Q(Q: np.ndarray, tol: float = 1e-8) -> int:
    """Number of singular values above tol * sigma_max."""
    if Q.size == 0:
        return 0
    sigma = np.linalg.svd(Q, compute_uv=False)
    if sigma[0] == 0.0:
        return 0
    return int(np.sum(sigma > tol * sigma[0]))
