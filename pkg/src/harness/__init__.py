"""
Evaluation harness - synthetic data, metrics, experiments and result files.
"""
from src.harness.noise import NOISE_PRESETS, NoiseModel, noise_preset
from src.harness.synthetic import SyntheticSource, synthetic_source
from src.harness.metrics import mpd, nad, particle_differences
from src.harness.reports import (
    read_report_json,
    read_trajectory_csv,
    write_report_json,
    write_results_csv,
    write_summary_tables,
    write_trajectory_csv,
)
from src.harness.experiment import ALL_METHODS, evaluate_reports, heldout_actions, run_experiment

__all__ = [
    # Noise
    "NOISE_PRESETS",
    "NoiseModel",
    "noise_preset",
    # Source
    "SyntheticSource",
    "synthetic_source",
    # Metrics
    "nad",
    "mpd",
    "particle_differences",
    # Files
    "read_report_json",
    "read_trajectory_csv",
    "write_report_json",
    "write_results_csv",
    "write_summary_tables",
    "write_trajectory_csv",
    # Experiments
    "ALL_METHODS",
    "evaluate_reports",
    "heldout_actions",
    "run_experiment",
]
