"""
Evaluation metrics.
"""
import numpy as np

from src.errors import IncompatibleTrajectoriesError
from src.models.groups import GroupMaps
from src.models.particles import ParticleModel
from src.physics.kinematics import world_positions
from src.physics.trajectory import Trajectory


def nad(m_est, m_true, maps: GroupMaps) -> float:
    """Normalized absolute difference of the per-particle mass distribution."""
    counts = maps.group_counts()
    m_est = np.asarray(m_est, dtype=float)
    m_true = np.asarray(m_true, dtype=float)
    return float(counts @ np.abs(m_est - m_true) / (counts @ m_true))


def final_positions(traj: Trajectory, model: ParticleModel) -> np.ndarray:
    return world_positions(model, traj.poses[-1], traj.reference)


def mpd(traj_sim: Trajectory, traj_true: Trajectory, model: ParticleModel) -> float:
    """Mean particle distance at the final time step."""
    if traj_sim.n_steps != traj_true.n_steps:
        raise IncompatibleTrajectoriesError(
            f"trajectory lengths differ: {traj_sim.n_steps} vs {traj_true.n_steps} steps"
        )
    if traj_sim.dt != traj_true.dt:
        raise IncompatibleTrajectoriesError(f"time steps differ: {traj_sim.dt} vs {traj_true.dt}")
    distances = np.linalg.norm(final_positions(traj_sim, model) - final_positions(traj_true, model), axis=1)
    return float(distances.mean())


def particle_differences(m_est, m_true, maps: GroupMaps) -> np.ndarray:
    """Per-particle absolute mass error."""
    return np.abs(np.asarray(m_est, dtype=float) - np.asarray(m_true, dtype=float))[maps.mass_assignment]
