"""
Kinematic trajectories of actions and the wrench that drives them.
"""
import logging
from typing import Optional

import numpy as np

from src.actions.spec import ActionSpec
from src.config import SimConfig
from src.errors import SingularInertiaError
from src.models.groups import GroupMaps, HiddenStates
from src.models.particles import ParticleModel
from src.physics.dynamics import friction_directions, world_com
from src.physics.kinematics import ObjectState, cross, perp, world_kinematics
from src.physics.trajectory import Trajectory


logger = logging.getLogger(__name__)


def canonical_pose(model: ParticleModel, grasp: int) -> np.ndarray:
    """Pose of the grasp particle with the body frame aligned to the world frame."""
    x, y = model.positions[grasp]
    return np.array([x, y, 0.0])


def rotation_angles(action: ActionSpec, steps: int, dt: float) -> np.ndarray:
    """Heading increments phi_t (t = 0..steps) of a rotation under Euler integration."""
    t = np.arange(steps + 1)
    return action.angular_rate * t * dt + action.angular_accel * dt * dt * t * (t - 1) / 2.0


def kinematic_trajectory(
    action: ActionSpec,
    model: ParticleModel,
    initial_pose: Optional[np.ndarray] = None,
    config: Optional[SimConfig] = None,
) -> Trajectory:
    """
    Commanded motion of an action, with zero placeholder wrenches.

    The pose tracks the grasp particle. States are Euler-consistent:
    pose_{t+1} = pose_t + v_t dt for every step.

    Args:
        action: slide or rotate action
        model: particle model
        initial_pose: grasp-particle pose at t = 0 (defaults to the canonical placement)
        config: simulation config

    Returns:
        Trajectory referenced to the grasp particle
    """
    config = config or SimConfig()
    action.validate_for(model)
    grasp = action.grasp_particle
    pose0 = canonical_pose(model, grasp) if initial_pose is None else np.asarray(initial_pose, dtype=float)
    steps = action.steps(config.dt)
    dt = config.dt
    t = np.arange(steps + 1)

    velocities = np.zeros((steps + 1, 3))
    if action.is_rotate:
        velocities[:, 2] = action.angular_rate + action.angular_accel * t * dt
        poses = np.tile(pose0, (steps + 1, 1))
        poses[:, 2] = pose0[2] + rotation_angles(action, steps, dt)
    else:
        v = np.array([action.speed * action.direction[0], action.speed * action.direction[1], 0.0])
        velocities[:] = v
        poses = pose0 + np.outer(t * dt, v)

    return Trajectory(
        config=config,
        poses=poses,
        velocities=velocities,
        grasp_indices=np.full(steps, grasp, dtype=int),
        wrenches=np.zeros((steps, 3)),
        reference=grasp,
    )


def inverse_dynamics_wrench(
    traj: Trajectory,
    model: ParticleModel,
    maps: GroupMaps,
    H: HiddenStates,
    grasp_particle: int,
    config: Optional[SimConfig] = None,
) -> Trajectory:
    """
    Wrench at the grasp particle that reproduces a trajectory.

    Accelerations come from the finite differences of the states,
    a_t = (v_{t+1} - v_t) / dt, which for Euler-consistent states equals the central
    second difference of the poses about t+1 (one-sided at the last step).
    The translational equations give (u_x, u_y); the rotational equation gives u_w
    after subtracting the force-lever term.

    Returns:
        The input trajectory with the synthesized wrenches
    """
    config = config or traj.config
    dt = config.dt
    reference = traj.reference
    s = H.particle_friction(maps)
    has_friction = bool(np.any(s))
    accels = traj.velocity_deltas() / dt

    wrenches = np.zeros((traj.n_steps, 3))
    for t in range(traj.n_steps):
        state = traj.state(t)
        a_ref = accels[t]
        positions, velocities = world_kinematics(model, state, reference)
        c = world_com(model, H, state, reference)
        levers = positions - c

        alpha = a_ref[2]
        d = state.pose[:2] - c
        w = state.velocity[2]
        a_c = a_ref[:2] - alpha * perp(d) + w * w * d

        friction_force = np.zeros(2)
        friction_torque = 0.0
        if has_friction:
            dhat = friction_directions(velocities, config.velocity_epsilon)
            friction_force = -(s @ dhat)
            friction_torque = -float(s @ cross(dhat, levers))

        u_xy = H.M * a_c - friction_force
        if H.I_cm <= 0 and alpha != 0.0:
            raise SingularInertiaError(f"step {t} needs angular acceleration {alpha} with zero inertia")
        u_w = H.I_cm * alpha - friction_torque - cross(u_xy, levers[grasp_particle])
        wrenches[t] = (u_xy[0], u_xy[1], u_w)

    return traj.with_wrenches(wrenches, np.full(traj.n_steps, grasp_particle, dtype=int))
