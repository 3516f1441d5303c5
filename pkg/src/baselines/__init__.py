"""
Baselines - joint (m, mu) searches on the one-step prediction loss.
"""
from src.baselines.base import Bounds, SearchMethod, SearchResult
from src.baselines.loss import JointLoss
from src.baselines.optimizers import ProjectedRule, GradientStep, MomentumStep, AdamStep, RMSPropStep
from src.baselines.random_search import RandomSearch, random_search, evaluate_population
from src.baselines.weighted_sampling import WeightedSamplingSearch, weighted_sampling_search, grid_points
from src.baselines.explicit_state import ExplicitStateSearch, explicit_state_gd
from src.baselines.factory import BASELINE_METHODS, get_search_method, run_baseline

__all__ = [
    # Base classes
    "Bounds",
    "SearchMethod",
    "SearchResult",
    "JointLoss",
    # Update rules
    "ProjectedRule",
    "GradientStep",
    "MomentumStep",
    "AdamStep",
    "RMSPropStep",
    # Searches
    "RandomSearch",
    "random_search",
    "evaluate_population",
    "WeightedSamplingSearch",
    "weighted_sampling_search",
    "grid_points",
    "ExplicitStateSearch",
    "explicit_state_gd",
    # Factory
    "BASELINE_METHODS",
    "get_search_method",
    "run_baseline",
]
