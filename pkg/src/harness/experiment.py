"""
Experiment runner: every (object, method, seed) cell on synthetic data, scored by
NAD and held-out MPD.
"""
import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from src.actions.spec import ActionSpec, rotate
from src.baselines.factory import BASELINE_METHODS, run_baseline
from src.config import ActionConfig, Settings, SimConfig, get_settings
from src.errors import EvaluationError, MassDistError
from src.estimation.pipeline import METHOD_NAME, Dataset, HiddenStatesEstimator
from src.harness.metrics import mpd, nad, particle_differences
from src.harness.noise import NoiseModel, noise_preset
from src.harness.reports import (
    read_report_json,
    report_filename,
    write_difference_grid,
    write_report_json,
    write_results_csv,
    write_summary_tables,
)
from src.harness.synthetic import SyntheticSource
from src.models.catalog import object_from_descriptor, resolve_object
from src.models.groups import GroupMaps, HiddenStates, ObjectParams
from src.models.particles import ParticleModel
from src.physics.dynamics import simulate
from src.physics.kinematics import ObjectState, WrenchInput
from src.physics.trajectory import Trajectory
from src.schemas.objects import ObjectDescriptor
from src.schemas.reports import EstimationReport, ExperimentResult


logger = logging.getLogger(__name__)

ALL_METHODS: List[str] = [METHOD_NAME] + BASELINE_METHODS


@dataclass
class CellOutput:
    result: ExperimentResult
    report: Optional[EstimationReport] = None


# =============================================================================
# Held-out evaluation
# =============================================================================

def heldout_actions(
    model: ParticleModel,
    used_pivots: Sequence[int],
    action_config: ActionConfig,
    limit: int,
) -> List[ActionSpec]:
    """Rotations about graspable particles never used as a pivot in training."""
    used = set(used_pivots)
    candidates = [int(p) for p in model.graspable_indices if int(p) not in used]
    if not candidates:
        raise EvaluationError("no graspable particle left for held-out rotations")
    return [
        rotate(p, action_config.rotate_rate, action_config.rotate_duration)
        for p in candidates[:limit]
    ]


def hidden_states_from_report(report: EstimationReport) -> HiddenStates:
    h = report.hidden_states
    return HiddenStates(M=h.M, I_cm=h.I_cm, c=np.asarray(h.c), s=np.asarray(h.s))


def replay(
    model: ParticleModel,
    maps: GroupMaps,
    H: HiddenStates,
    initial: ObjectState,
    inputs: Sequence[WrenchInput],
    config: SimConfig,
    reference: int = 0,
    substeps: int = 1,
) -> Trajectory:
    """
    Open-loop replay of recorded wrenches, each held over `substeps` integrator steps.

    Friction near a pivot is stiff at the recording step, so replays run at dt / substeps.
    """
    fine = config.model_copy(update={"dt": config.dt / substeps})
    held = [u for u in inputs for _ in range(substeps)]
    return simulate(model, maps, H, initial, held, fine, reference)


def heldout_mpd(
    model: ParticleModel,
    maps: GroupMaps,
    H: HiddenStates,
    source: SyntheticSource,
    actions: Sequence[ActionSpec],
    config: SimConfig,
    substeps: int = 1,
) -> float:
    """
    Mean particle distance after replaying the measured wrenches through the estimated
    model, against the same wrenches replayed through the true model.
    """
    distances = []
    for action in actions:
        start = source.true_trajectory(action).state(0)
        measured = source.observe(action).trajectory
        truth = replay(model, maps, source.hidden_states, start, measured.inputs, config, measured.reference, substeps)
        predicted = replay(model, maps, H, start, measured.inputs, config, measured.reference, substeps)
        distances.append(mpd(predicted, truth, model))
    return float(np.mean(distances))


def score_report(
    report: EstimationReport,
    model: ParticleModel,
    maps: GroupMaps,
    params_true: ObjectParams,
    source: SyntheticSource,
    settings: Settings,
) -> Tuple[float, Optional[float], Optional[str]]:
    """NAD and held-out MPD of one report; an MPD failure is returned, not raised."""
    score = nad(report.masses, params_true.m, maps)
    try:
        actions = heldout_actions(model, report.used_pivots(), settings.action_config(), settings.heldout_actions)
        distance = heldout_mpd(
            model, maps, hidden_states_from_report(report), source, actions, source.config, settings.heldout_substeps
        )
        return score, distance, None
    except MassDistError as e:
        logger.warning(f"{report.object_name}/{report.method}: held-out evaluation failed: {e}")
        return score, None, str(e)


# =============================================================================
# Cells
# =============================================================================

def _estimate(
    method: str,
    dataset: Dataset,
    estimator: HiddenStatesEstimator,
    object_name: str,
    seed: int,
    settings: Settings,
) -> EstimationReport:
    if method == METHOD_NAME:
        return estimator.estimate(dataset, object_name)
    observations = dataset.training_observations()
    return run_baseline(
        method,
        [o.trajectory for o in observations],
        estimator.model,
        estimator.maps,
        settings.search_config(seed=seed),
        estimator.sim_config,
        object_name,
        [o.action for o in observations],
    )


def run_cell(
    object_name: str,
    descriptor: ObjectDescriptor,
    methods: Sequence[str],
    noise: NoiseModel,
    seed: int,
    settings: Settings,
) -> List[CellOutput]:
    """
    Run all methods on one (object, seed) pair.

    Data is collected once and shared by every method.
    """
    model, maps, params = object_from_descriptor(descriptor)
    sim_config = settings.sim_config()
    source = SyntheticSource(model, maps, params, noise.with_seed(seed), sim_config)
    estimator = HiddenStatesEstimator(
        model, maps, settings.estimator_config(), settings.action_config(), sim_config, seed
    )
    snapshot = {"noise": noise.model_dump(mode="json")}

    def failed(method: str, error: Exception, runtime: float) -> CellOutput:
        return CellOutput(
            ExperimentResult(
                object_name=object_name, method=method, seed=seed, runtime=runtime, error=str(error), config=snapshot
            )
        )

    start_time = time.time()
    try:
        dataset = estimator.collect(source)
    except MassDistError as e:
        logger.error(f"{object_name} seed {seed}: data collection failed: {e}", exc_info=True)
        return [failed(m, e, time.time() - start_time) for m in methods]
    collect_time = time.time() - start_time

    outputs: List[CellOutput] = []
    for method in methods:
        start_time = time.time()
        try:
            report = _estimate(method, dataset, estimator, object_name, seed, settings)
            report.runtime = time.time() - start_time + (collect_time if method == METHOD_NAME else 0.0)
            score, distance, mpd_error = score_report(report, model, maps, params, source, settings)
        except MassDistError as e:
            logger.error(f"{object_name}/{method} seed {seed} failed: {e}", exc_info=True)
            outputs.append(failed(method, e, time.time() - start_time))
            continue

        logger.info(f"{object_name}/{method} seed {seed}: NAD {score:.4f}, MPD {distance}")
        outputs.append(
            CellOutput(
                ExperimentResult(
                    object_name=object_name,
                    method=method,
                    seed=seed,
                    nad=score,
                    mpd=distance,
                    runtime=report.runtime,
                    mpd_error=mpd_error,
                    config=snapshot,
                ),
                report,
            )
        )
    return outputs


# =============================================================================
# Experiment
# =============================================================================

def run_experiment(
    objects: Sequence[str],
    methods: Sequence[str],
    noise: Union[str, NoiseModel],
    seeds: Sequence[int],
    settings: Optional[Settings] = None,
    out_dir: Optional[Union[str, Path]] = None,
    include_runtime: bool = False,
) -> List[ExperimentResult]:
    """
    Run every (object, method, seed) cell and optionally write the result files.

    Cells that fail are recorded with their error; the run continues.

    Returns:
        Results ordered by object, then seed, then method
    """
    settings = settings or get_settings()
    if isinstance(noise, str):
        noise = noise_preset(noise)
    unknown = [m for m in methods if m not in ALL_METHODS]
    if unknown:
        raise ValueError(f"Unknown method(s): {', '.join(unknown)}")

    resolved = [resolve_object(o) for o in objects]
    cells = [(name, descriptor, seed) for name, descriptor in resolved for seed in seeds]
    logger.info(f"Running {len(cells)} cells x {len(methods)} methods with {settings.workers} worker(s)")

    def run(cell) -> List[CellOutput]:
        name, descriptor, seed = cell
        return run_cell(name, descriptor, methods, noise, seed, settings)

    if settings.workers > 1:
        with ThreadPoolExecutor(max_workers=settings.workers) as executor:
            per_cell = list(executor.map(run, cells))
    else:
        per_cell = [run(cell) for cell in cells]

    outputs = [o for cell_outputs in per_cell for o in cell_outputs]
    results = [o.result for o in outputs]

    if out_dir is not None:
        out_dir = Path(out_dir)
        descriptors = dict(resolved)
        for o in outputs:
            if o.report is None:
                continue
            r = o.result
            write_report_json(o.report, out_dir / "reports" / report_filename(r.object_name, r.method, r.seed), include_runtime)
            model, maps, params = object_from_descriptor(descriptors[r.object_name])
            write_difference_grid(
                model,
                particle_differences(o.report.masses, params.m, maps),
                out_dir / "grids" / f"{r.object_name}_{r.method}_seed{r.seed}.csv",
            )
        write_results_csv(results, out_dir / "results.csv", include_runtime)
        truth_known = [name for name, descriptor in resolved if descriptor.truth_known]
        write_summary_tables(results, out_dir, truth_known)

    return results


def evaluate_reports(
    reports_dir: Union[str, Path],
    truth_dir: Optional[Union[str, Path]] = None,
    settings: Optional[Settings] = None,
) -> List[ExperimentResult]:
    """
    Score saved reports against true parameters.

    The truth for object X is read from <truth_dir>/X.json when present, otherwise from
    the catalog.
    """
    settings = settings or get_settings()
    paths = sorted(Path(reports_dir).glob("*.json"))
    if not paths:
        raise EvaluationError(f"no report files in {reports_dir}")

    results: List[ExperimentResult] = []
    for path in paths:
        report = read_report_json(path)
        truth_file = Path(truth_dir) / f"{report.object_name}.json" if truth_dir else None
        _, descriptor = resolve_object(str(truth_file) if truth_file and truth_file.exists() else report.object_name)
        model, maps, params = object_from_descriptor(descriptor)
        source = SyntheticSource(model, maps, params, config=settings.sim_config())
        seed = report.seed if report.seed is not None else 0
        try:
            if len(report.masses) != maps.n_m:
                raise EvaluationError(
                    f"{path.name}: {len(report.masses)} masses for {maps.n_m} mass groups"
                )
            score, distance, mpd_error = score_report(report, model, maps, params, source, settings)
            results.append(
                ExperimentResult(
                    object_name=report.object_name, method=report.method, seed=seed,
                    nad=score, mpd=distance, mpd_error=mpd_error,
                )
            )
        except MassDistError as e:
            logger.error(f"Cannot evaluate {path.name}: {e}")
            results.append(
                ExperimentResult(object_name=report.object_name, method=report.method, seed=seed, error=str(e))
            )
    return results
