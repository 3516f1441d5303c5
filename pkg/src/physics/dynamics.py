"""
Forward dynamics under a single-particle wrench and Coulomb sliding friction,
integrated with explicit Euler.
"""
import logging
from typing import List, Optional, Sequence, Tuple

import numpy as np

from src.config import SimConfig
from src.errors import DivergenceError, InvalidShapeError, SingularInertiaError
from src.models.groups import GroupMaps, HiddenStates
from src.models.particles import ParticleModel
from src.physics.kinematics import (
    ObjectState,
    WrenchInput,
    body_to_world,
    cross,
    perp,
    world_kinematics,
)
from src.physics.trajectory import Trajectory


logger = logging.getLogger(__name__)


def friction_directions(velocities: np.ndarray, velocity_epsilon: float) -> np.ndarray:
    """Unit particle velocities; zero where the speed is at or below velocity_epsilon."""
    speed = np.linalg.norm(velocities, axis=-1)
    moving = speed > velocity_epsilon
    safe = np.where(moving, speed, 1.0)
    return np.where(moving[..., None], velocities / safe[..., None], 0.0)


def world_com(model: ParticleModel, H: HiddenStates, state: ObjectState, reference: int = 0) -> np.ndarray:
    return body_to_world(H.c, model, state.pose, reference)


def net_wrench(
    model: ParticleModel,
    maps: GroupMaps,
    H: HiddenStates,
    state: ObjectState,
    input: WrenchInput,
    config: SimConfig,
    reference: int = 0,
) -> Tuple[np.ndarray, float]:
    """Net force and torque about the world center of mass."""
    positions, velocities = world_kinematics(model, state, reference)
    levers = positions - world_com(model, H, state, reference)
    u = input.u

    force = u[:2].copy()
    torque = u[2] + cross(u[:2], levers[input.particle_index])

    s = H.particle_friction(maps)
    if np.any(s):
        dhat = friction_directions(velocities, config.velocity_epsilon)
        force -= s @ dhat
        torque -= s @ cross(dhat, levers)
    return force, float(torque)


def compute_accel(
    model: ParticleModel,
    maps: GroupMaps,
    H: HiddenStates,
    state: ObjectState,
    input: WrenchInput,
    config: SimConfig,
    reference: int = 0,
) -> np.ndarray:
    """
    Acceleration [a_x, a_y, a_w] of the center of mass.

    Args:
        model: particle model
        maps: group maps (contact groups select each particle's friction magnitude)
        H: Hidden States
        state: pose/velocity of the reference particle
        input: wrench at the grasped particle
        config: simulation config
        reference: particle index the pose tracks

    Returns:
        [F_x / M, F_y / M, tau / I_cm]
    """
    if H.M <= 0:
        raise SingularInertiaError(f"total mass must be positive, got {H.M}")
    force, torque = net_wrench(model, maps, H, state, input, config, reference)
    if H.I_cm <= 0:
        if torque != 0.0:
            raise SingularInertiaError(f"nonzero torque {torque} with moment of inertia {H.I_cm}")
        alpha = 0.0
    else:
        alpha = torque / H.I_cm
    return np.array([force[0] / H.M, force[1] / H.M, alpha])


def reference_accel(
    model: ParticleModel,
    H: HiddenStates,
    state: ObjectState,
    accel: np.ndarray,
    reference: int = 0,
) -> np.ndarray:
    """
    Transfer a center-of-mass acceleration to the pose reference particle.

    a_ref = a_c + alpha * perp(d) - w^2 d with d the lever from the center of mass to the
    reference. The identity when the reference sits on the center of mass.
    """
    d = state.pose[:2] - world_com(model, H, state, reference)
    w = state.velocity[2]
    alpha = accel[2]
    xy = accel[:2] + alpha * perp(d) - w * w * d
    return np.array([xy[0], xy[1], alpha])


def step(state: ObjectState, accel: np.ndarray, config: SimConfig) -> ObjectState:
    """Explicit Euler: the pose advances with the pre-update velocity."""
    pose = state.pose + state.velocity * config.dt
    velocity = state.velocity + np.asarray(accel, dtype=float) * config.dt
    return ObjectState(pose, velocity)


def simulate(
    model: ParticleModel,
    maps: GroupMaps,
    H: HiddenStates,
    initial: ObjectState,
    inputs: Sequence[WrenchInput],
    config: SimConfig,
    reference: int = 0,
) -> Trajectory:
    """
    Roll the dynamics forward over the given inputs.

    Returns:
        Trajectory with len(inputs) + 1 states
    """
    if len(inputs) == 0:
        raise InvalidShapeError("simulate needs at least one input")

    states: List[ObjectState] = [initial]
    state = initial
    for t, input in enumerate(inputs):
        a_c = compute_accel(model, maps, H, state, input, config, reference)
        accel = reference_accel(model, H, state, a_c, reference)
        state = step(state, accel, config)
        if not state.is_finite():
            raise DivergenceError(f"non-finite state after step {t}", step=t)
        states.append(state)

    logger.debug(f"Simulated {len(inputs)} steps (dt={config.dt})")
    return Trajectory.from_states(states, list(inputs), config, reference)


def free_inputs(grasp: int, steps: int) -> List[WrenchInput]:
    """Zero wrench at one particle for the given number of steps."""
    return [WrenchInput(grasp, np.zeros(3)) for _ in range(steps)]


def com_velocity(
    model: ParticleModel,
    H: HiddenStates,
    state: ObjectState,
    reference: int = 0,
) -> np.ndarray:
    """Velocity [v_x, v_y, v_w] of the center of mass."""
    d = state.pose[:2] - world_com(model, H, state, reference)
    xy = state.velocity[:2] - state.velocity[2] * perp(d)
    return np.array([xy[0], xy[1], state.velocity[2]])


def kinetic_energy(
    model: ParticleModel,
    H: HiddenStates,
    state: ObjectState,
    reference: int = 0,
) -> float:
    v = com_velocity(model, H, state, reference)
    return 0.5 * H.M * float(v[:2] @ v[:2]) + 0.5 * H.I_cm * float(v[2] ** 2)


def stable_dt_bound(H: HiddenStates, maps: GroupMaps, speed: float) -> Optional[float]:
    """
    Largest dt for which a friction step cannot reverse a sliding body moving at `speed`.

    Below this bound the Coulomb deceleration over one step is smaller than the speed,
    so kinetic energy does not increase across a step.
    """
    total = float(H.particle_friction(maps).sum())
    if total == 0.0:
        return None
    return speed * H.M / total
