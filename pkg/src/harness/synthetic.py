"""
Synthetic observation source standing in for the robot, its wrist force/torque sensor,
the motion capture and the scale.
"""
import hashlib
import logging
from typing import Optional

import numpy as np

from src.actions.filtering import filter_feedback
from src.actions.spec import ActionSpec
from src.actions.trajectories import inverse_dynamics_wrench, kinematic_trajectory
from src.config import SimConfig
from src.estimation.source import Observation, ObservationSource
from src.harness.noise import NoiseModel
from src.models.groups import GroupMaps, ObjectParams, hidden_states_of
from src.models.particles import ParticleModel
from src.physics.trajectory import Trajectory


logger = logging.getLogger(__name__)


class SyntheticSource(ObservationSource):
    """
    Observation source backed by the true parameters.

    For each action: kinematic trajectory, inverse-dynamics wrench, additive Gaussian
    noise on wrench and poses, then feedback filtering. Noise depends only on the noise
    seed and the action, so repeated queries return identical data.
    """

    def __init__(
        self,
        model: ParticleModel,
        maps: GroupMaps,
        params: ObjectParams,
        noise: Optional[NoiseModel] = None,
        config: Optional[SimConfig] = None,
    ):
        self.model = model
        self.maps = maps
        self.params = params
        self.noise = noise or NoiseModel()
        self.config = config or SimConfig()
        self.hidden_states = hidden_states_of(model, maps, params, self.config.gravity)

    @property
    def source_name(self) -> str:
        return "synthetic"

    def _rng(self, key: str) -> np.random.Generator:
        """Deterministic generator per (noise seed, key)."""
        digest = int(hashlib.md5(key.encode()).hexdigest()[:12], 16)
        return np.random.default_rng([self.noise.seed, digest])

    def weigh(self) -> float:
        M = self.hidden_states.M
        if self.noise.scale_sigma == 0:
            return M
        return float(M + self.noise.scale_sigma * self._rng("weigh").standard_normal())

    def true_trajectory(self, action: ActionSpec) -> Trajectory:
        """Commanded motion with the exact wrench that produces it."""
        kinematic = kinematic_trajectory(action, self.model, config=self.config)
        return inverse_dynamics_wrench(
            kinematic, self.model, self.maps, self.hidden_states, action.grasp_particle, self.config
        )

    def observe(self, action: ActionSpec) -> Observation:
        truth = self.true_trajectory(action)
        rng = self._rng(action.model_dump_json())

        # 1. Sensor reading
        force_sigma, torque_sigma = self.noise.wrench_sigma
        sigma = np.array([force_sigma, force_sigma, torque_sigma])
        raw = truth.wrenches + sigma * rng.standard_normal(truth.wrenches.shape)
        wrenches = filter_feedback(raw, action, self.config)

        # 2. Motion capture
        position_sigma, heading_sigma = self.noise.pose_sigma
        if position_sigma == 0 and heading_sigma == 0:
            poses, velocities = truth.poses, truth.velocities
        else:
            sigma = np.array([position_sigma, position_sigma, heading_sigma])
            poses = truth.poses + sigma * rng.standard_normal(truth.poses.shape)
            velocities = np.empty_like(poses)
            velocities[:-1] = np.diff(poses, axis=0) / self.config.dt
            velocities[-1] = velocities[-2]

        trajectory = Trajectory(
            config=self.config,
            poses=poses,
            velocities=velocities,
            grasp_indices=truth.grasp_indices,
            wrenches=wrenches,
            reference=truth.reference,
        )
        return Observation(action, trajectory)


def synthetic_source(
    model: ParticleModel,
    maps: GroupMaps,
    params_true: ObjectParams,
    noise: Optional[NoiseModel] = None,
    config: Optional[SimConfig] = None,
) -> SyntheticSource:
    return SyntheticSource(model, maps, params_true, noise, config)
