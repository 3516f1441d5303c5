"""
Actions - vocabulary, kinematic trajectories, wrench synthesis, filtering and the
regression model used to select and exploit them.
"""
from src.actions.spec import (
    ActionKind,
    ActionSpec,
    slide,
    rotate,
    enumerate_actions,
    load_actions,
    save_actions,
)
from src.actions.trajectories import (
    canonical_pose,
    kinematic_trajectory,
    inverse_dynamics_wrench,
    rotation_angles,
)
from src.actions.filtering import filter_feedback, smooth_trajectory, fitted_angular_accel
from src.actions.regression import (
    RegressionBlock,
    wrench_block,
    regression_block,
    regression_blocks,
    build_Q,
    rank_Q,
)
from src.actions.sampling import sample_actions

__all__ = [
    # Vocabulary
    "ActionKind",
    "ActionSpec",
    "slide",
    "rotate",
    "enumerate_actions",
    "load_actions",
    "save_actions",
    # Trajectories
    "canonical_pose",
    "kinematic_trajectory",
    "inverse_dynamics_wrench",
    "rotation_angles",
    # Filtering
    "filter_feedback",
    "smooth_trajectory",
    "fitted_angular_accel",
    # Regression
    "RegressionBlock",
    "wrench_block",
    "regression_block",
    "regression_blocks",
    "build_Q",
    "rank_Q",
    # Sampling
    "sample_actions",
]
