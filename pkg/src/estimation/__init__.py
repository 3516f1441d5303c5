"""
Estimation - pivot inertia, center of mass, friction magnitudes and masses, chained by
the multi-stage Hidden States estimator.
"""
from src.estimation.inertia import (
    PivotInertiaSample,
    fit_pivot_inertia,
    solve_com_inertia,
    check_not_collinear,
)
from src.estimation.friction import (
    LeastSquaresResult,
    GradientDescentResult,
    loss_and_grad,
    estimate_s_lsq,
    estimate_s_gd,
)
from src.estimation.masses import MassRecovery, mass_equations, recover_m, recover_mu
from src.estimation.source import Observation, ObservationSource
from src.estimation.pipeline import Dataset, HiddenStatesEstimator, run_pipeline

__all__ = [
    # Object-level stage
    "PivotInertiaSample",
    "fit_pivot_inertia",
    "solve_com_inertia",
    "check_not_collinear",
    # Friction stage
    "LeastSquaresResult",
    "GradientDescentResult",
    "loss_and_grad",
    "estimate_s_lsq",
    "estimate_s_gd",
    # Mass recovery
    "MassRecovery",
    "mass_equations",
    "recover_m",
    "recover_mu",
    # Sources
    "Observation",
    "ObservationSource",
    # Pipeline
    "Dataset",
    "HiddenStatesEstimator",
    "run_pipeline",
]
