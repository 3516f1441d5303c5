"""
Result files: trajectory CSVs, estimation report JSON, results and summary tables,
per-particle error grids.
"""
import json
import logging
from pathlib import Path
from typing import List, Optional, Sequence, Union

import numpy as np
import pandas as pd
from pydantic import ValidationError

from src.config import SimConfig
from src.errors import InvalidShapeError, ReportIOError
from src.models.particles import ParticleModel
from src.physics.trajectory import Trajectory
from src.schemas.reports import EstimationReport, ExperimentResult


logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

TRAJECTORY_COLUMNS = ["t", "px", "py", "pw", "vx", "vy", "vw", "grasp_idx", "ux", "uy", "uw"]
RESULT_COLUMNS = ["object", "method", "seed", "nad", "mpd", "error", "mpd_error"]


def _write_csv(frame: pd.DataFrame, path: PathLike, **kwargs) -> None:
    try:
        Path(path).parent.mkdir(parents=True, exist_ok=True)
        frame.to_csv(path, **kwargs)
    except OSError as e:
        raise ReportIOError(f"Cannot write {path}: {e}") from e


# =============================================================================
# Trajectories
# =============================================================================

def trajectory_frame(traj: Trajectory) -> pd.DataFrame:
    """One row per state; the final row has no input."""
    frame = pd.DataFrame(
        np.column_stack([traj.times, traj.poses, traj.velocities]),
        columns=TRAJECTORY_COLUMNS[:7],
    )
    frame["grasp_idx"] = pd.array([int(g) for g in traj.grasp_indices] + [None], dtype="Int64")
    wrenches = np.vstack([traj.wrenches, np.full((1, 3), np.nan)])
    for i, column in enumerate(["ux", "uy", "uw"]):
        frame[column] = wrenches[:, i]
    return frame


def write_trajectory_csv(traj: Trajectory, path: PathLike) -> None:
    _write_csv(trajectory_frame(traj), path, index=False, na_rep="")
    logger.debug(f"Wrote {traj.n_steps} steps to {path}")


def read_trajectory_csv(
    path: PathLike,
    config: Optional[SimConfig] = None,
    reference: int = 0,
) -> Trajectory:
    """Read a trajectory CSV; dt comes from the time column unless a config is given."""
    try:
        frame = pd.read_csv(path, dtype={"grasp_idx": "Int64"})
    except OSError as e:
        raise ReportIOError(f"Cannot read trajectory {path}: {e}") from e
    except (pd.errors.ParserError, pd.errors.EmptyDataError, ValueError) as e:
        raise InvalidShapeError(f"Invalid trajectory file {path}: {e}") from e

    missing = [c for c in TRAJECTORY_COLUMNS if c not in frame.columns]
    if missing or len(frame) < 2:
        raise InvalidShapeError(f"Invalid trajectory file {path}: missing columns {missing} or too few rows")

    if config is None:
        config = SimConfig(dt=float(round(frame["t"].iloc[1] - frame["t"].iloc[0], 12)))
    inputs = frame.iloc[:-1]
    return Trajectory(
        config=config,
        poses=frame[["px", "py", "pw"]].to_numpy(dtype=float),
        velocities=frame[["vx", "vy", "vw"]].to_numpy(dtype=float),
        grasp_indices=inputs["grasp_idx"].to_numpy(dtype=int),
        wrenches=inputs[["ux", "uy", "uw"]].to_numpy(dtype=float),
        reference=reference,
    )


# =============================================================================
# Estimation reports
# =============================================================================

def write_report_json(report: EstimationReport, path: PathLike, include_runtime: bool = False) -> None:
    exclude = None if include_runtime else {"runtime"}
    try:
        Path(path).parent.mkdir(parents=True, exist_ok=True)
        Path(path).write_text(report.model_dump_json(indent=2, exclude=exclude), encoding="utf-8")
    except OSError as e:
        raise ReportIOError(f"Cannot write report {path}: {e}") from e


def read_report_json(path: PathLike) -> EstimationReport:
    try:
        with open(path, "r", encoding="utf-8") as f:
            return EstimationReport.model_validate(json.load(f))
    except OSError as e:
        raise ReportIOError(f"Cannot read report {path}: {e}") from e
    except (json.JSONDecodeError, ValidationError) as e:
        raise InvalidShapeError(f"Invalid report {path}: {e}") from e


def report_filename(object_name: str, method: str, seed: Optional[int]) -> str:
    return f"{object_name}_{method}_seed{seed}.json"


# =============================================================================
# Result tables
# =============================================================================

def results_frame(results: Sequence[ExperimentResult], include_runtime: bool = False) -> pd.DataFrame:
    rows = []
    for r in results:
        row = {
            "object": r.object_name,
            "method": r.method,
            "seed": r.seed,
            "nad": r.nad,
            "mpd": r.mpd,
            "error": r.error,
            "mpd_error": r.mpd_error,
        }
        if include_runtime:
            row["runtime"] = r.runtime
        rows.append(row)
    columns = RESULT_COLUMNS + (["runtime"] if include_runtime else [])
    return pd.DataFrame(rows, columns=columns)


def write_results_csv(
    results: Sequence[ExperimentResult],
    path: PathLike,
    include_runtime: bool = False,
) -> None:
    _write_csv(results_frame(results, include_runtime), path, index=False, na_rep="")
    logger.info(f"Wrote {len(results)} results to {path}")


def summary_table(
    results: Sequence[ExperimentResult],
    metric: str,
    objects: Optional[List[str]] = None,
) -> pd.DataFrame:
    """Mean of a metric over seeds: one row per method, one column per object."""
    frame = results_frame(results)
    frame[metric] = pd.to_numeric(frame[metric], errors="coerce")
    methods = list(dict.fromkeys(frame["method"]))
    objects = objects if objects is not None else list(dict.fromkeys(frame["object"]))
    table = frame.groupby(["method", "object"])[metric].mean().unstack("object")
    return table.reindex(index=methods, columns=objects)


def write_summary_tables(
    results: Sequence[ExperimentResult],
    out_dir: PathLike,
    nad_objects: Optional[List[str]] = None,
) -> None:
    """summary_nad.csv (restricted to nad_objects when given) and summary_mpd.csv."""
    out_dir = Path(out_dir)
    _write_csv(summary_table(results, "nad", nad_objects), out_dir / "summary_nad.csv", na_rep="")
    _write_csv(summary_table(results, "mpd"), out_dir / "summary_mpd.csv", na_rep="")


# =============================================================================
# Per-particle error grids
# =============================================================================

def difference_grid(model: ParticleModel, differences: np.ndarray) -> pd.DataFrame:
    """Per-particle values laid out on the occupancy grid (blank where unoccupied)."""
    cells = np.asarray(model.cells)
    offset = cells.min(axis=0)
    rows, cols = (cells - offset).max(axis=0) + 1
    grid = np.full((rows, cols), np.nan)
    for (r, c), value in zip(cells - offset, differences):
        grid[r, c] = value
    return pd.DataFrame(grid)


def write_difference_grid(model: ParticleModel, differences: np.ndarray, path: PathLike) -> None:
    _write_csv(difference_grid(model, differences), path, index=False, header=False, na_rep="")
