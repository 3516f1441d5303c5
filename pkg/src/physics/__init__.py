"""
Dynamics - planar kinematics, accelerations under wrench and friction, Euler integration.
"""
from src.physics.kinematics import (
    ObjectState,
    WrenchInput,
    rotation,
    cross,
    perp,
    world_positions,
    world_kinematics,
)
from src.physics.trajectory import Trajectory
from src.physics.dynamics import (
    compute_accel,
    reference_accel,
    step,
    simulate,
    friction_directions,
    com_velocity,
    kinetic_energy,
)

__all__ = [
    # State types
    "ObjectState",
    "WrenchInput",
    "Trajectory",
    # Kinematics
    "rotation",
    "cross",
    "perp",
    "world_positions",
    "world_kinematics",
    # Dynamics
    "compute_accel",
    "reference_accel",
    "step",
    "simulate",
    "friction_directions",
    "com_velocity",
    "kinetic_energy",
]
