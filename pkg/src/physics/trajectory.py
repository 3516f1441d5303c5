"""
Trajectory container: T+1 states and T wrench inputs at a fixed time step.
"""
from dataclasses import dataclass, replace
from typing import List

import numpy as np

from src.config import SimConfig
from src.errors import InvalidShapeError
from src.models.particles import ParticleModel, _frozen
from src.physics.kinematics import ObjectState, WrenchInput, perp, rotation


@dataclass(frozen=True, eq=False)
class Trajectory:
    """
    Time-indexed object states and inputs.

    Attributes:
        config: simulation config (dt, gravity, velocity_epsilon)
        poses: (T+1, 3) reference-particle poses
        velocities: (T+1, 3) reference-particle velocities
        grasp_indices: (T,) grasped particle per step
        wrenches: (T, 3) applied [u_x, u_y, u_w] per step
        reference: particle index the pose tracks
    """
    config: SimConfig
    poses: np.ndarray
    velocities: np.ndarray
    grasp_indices: np.ndarray
    wrenches: np.ndarray
    reference: int = 0

    def __post_init__(self):
        poses = np.asarray(self.poses, dtype=float)
        velocities = np.asarray(self.velocities, dtype=float)
        grasp = np.asarray(self.grasp_indices, dtype=int).reshape(-1)
        wrenches = np.asarray(self.wrenches, dtype=float).reshape(-1, 3)
        T = len(wrenches)
        if poses.shape != (T + 1, 3) or velocities.shape != (T + 1, 3) or grasp.shape != (T,):
            raise InvalidShapeError(
                f"inconsistent trajectory lengths: poses {poses.shape}, velocities {velocities.shape}, "
                f"grasp {grasp.shape}, wrenches {wrenches.shape}"
            )
        object.__setattr__(self, "poses", _frozen(poses))
        object.__setattr__(self, "velocities", _frozen(velocities))
        object.__setattr__(self, "grasp_indices", _frozen(grasp))
        object.__setattr__(self, "wrenches", _frozen(wrenches))
        object.__setattr__(self, "reference", int(self.reference))

    @property
    def n_steps(self) -> int:
        return int(len(self.wrenches))

    @property
    def dt(self) -> float:
        return self.config.dt

    @property
    def times(self) -> np.ndarray:
        return np.arange(self.n_steps + 1) * self.config.dt

    @property
    def states(self) -> List[ObjectState]:
        return [ObjectState(p, v) for p, v in zip(self.poses, self.velocities)]

    @property
    def inputs(self) -> List[WrenchInput]:
        return [WrenchInput(i, u) for i, u in zip(self.grasp_indices, self.wrenches)]

    def state(self, t: int) -> ObjectState:
        return ObjectState(self.poses[t], self.velocities[t])

    def input(self, t: int) -> WrenchInput:
        return WrenchInput(self.grasp_indices[t], self.wrenches[t])

    def velocity_deltas(self) -> np.ndarray:
        """(T, 3) observed v_{t+1} - v_t."""
        return np.diff(self.velocities, axis=0)

    def with_wrenches(self, wrenches, grasp_indices=None) -> "Trajectory":
        return replace(
            self,
            wrenches=wrenches,
            grasp_indices=self.grasp_indices if grasp_indices is None else grasp_indices,
        )

    def with_states(self, poses, velocities) -> "Trajectory":
        return replace(self, poses=poses, velocities=velocities)

    def rereferenced(self, model: ParticleModel, reference: int = 0) -> "Trajectory":
        """The same motion with poses and velocities tracking another particle."""
        if reference == self.reference:
            return self
        lever = model.positions[reference] - model.positions[self.reference]
        world_lever = np.einsum("tij,j->ti", rotation(self.poses[:, 2]), lever)
        poses = self.poses.copy()
        poses[:, :2] += world_lever
        velocities = self.velocities.copy()
        velocities[:, :2] += self.velocities[:, 2:3] * perp(world_lever)
        return replace(self, poses=poses, velocities=velocities, reference=reference)

    @classmethod
    def from_states(
        cls,
        states: List[ObjectState],
        inputs: List[WrenchInput],
        config: SimConfig,
        reference: int = 0,
    ) -> "Trajectory":
        return cls(
            config=config,
            poses=np.array([s.pose for s in states]).reshape(-1, 3),
            velocities=np.array([s.velocity for s in states]).reshape(-1, 3),
            grasp_indices=np.array([w.particle_index for w in inputs], dtype=int),
            wrenches=np.array([w.u for w in inputs]).reshape(-1, 3),
            reference=reference,
        )
