"""
Multi-stage Hidden States estimation.
"""
import logging
import time
from concurrent.futures import ThreadPoolExecutor
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Dict, List, Optional

import numpy as np

from src.actions.filtering import fitted_angular_accel, smooth_trajectory
from src.actions.regression import regression_blocks
from src.actions.sampling import sample_actions
from src.actions.spec import ActionSpec, enumerate_actions, rotate
from src.config import ActionConfig, EstimatorConfig, SimConfig
from src.errors import DegenerateGeometryError, MassDistError
from src.estimation.friction import estimate_s_gd, estimate_s_lsq
from src.estimation.inertia import (
    PivotInertiaSample,
    check_not_collinear,
    fit_pivot_inertia,
    solve_com_inertia,
)
from src.estimation.masses import recover_m, recover_mu
from src.estimation.source import Observation, ObservationSource
from src.models.groups import GroupMaps, HiddenStates
from src.models.particles import ParticleModel
from src.schemas.reports import EstimationReport, HiddenStatesReport, PivotReport


logger = logging.getLogger(__name__)

METHOD_NAME = "hidden_states"


@contextmanager
def stage(name: str):
    """Tag domain errors raised inside the block with a stage name."""
    try:
        yield
    except MassDistError as e:
        raise e.with_stage(name)


@dataclass
class Dataset:
    """Everything collected from the source before the friction stage."""
    measured_mass: float
    actions: List[ActionSpec]
    pivots: List[int]
    sweeps: Dict[int, List[Observation]]
    pivot_samples: List[PivotInertiaSample]
    c: np.ndarray
    I_cm: float
    com_residual: float
    selected: List[ActionSpec]
    observations: List[Observation]
    warnings: List[str] = field(default_factory=list)

    def training_observations(self) -> List[Observation]:
        """Sweep and selected-action observations, in collection order."""
        sweeps = [o for pivot in self.pivots for o in self.sweeps[pivot]]
        return sweeps + list(self.observations)

    def training_actions(self) -> List[ActionSpec]:
        return [o.action for o in self.training_observations()]


class HiddenStatesEstimator:
    """
    Estimates per-group masses through the Hidden States (M, I_cm, c, s).

    Flow:
    1. Weigh the object; start from uniform mass and zero friction
    2. Build the action set
    3. Sample k non-collinear pivots and sweep each with several torque levels
    4. Fit pivot inertias, then solve for c and I_cm
    5. Sample actions until the friction magnitudes are identifiable
    6. Estimate s by gradient descent (closed form logged alongside)
    7. Recover masses and friction coefficients
    """

    def __init__(
        self,
        model: ParticleModel,
        maps: GroupMaps,
        config: Optional[EstimatorConfig] = None,
        action_config: Optional[ActionConfig] = None,
        sim_config: Optional[SimConfig] = None,
        seed: int = 0,
    ):
        maps.validate_for(model)
        self.model = model
        self.maps = maps
        self.config = config or EstimatorConfig()
        self.action_config = action_config or ActionConfig()
        self.sim_config = sim_config or SimConfig()
        self.seed = seed

    # =========================================================================
    # Data collection
    # =========================================================================

    def collect(self, source: ObservationSource) -> Dataset:
        """Run the data-collection stages against a source."""
        rng = np.random.default_rng(self.seed)
        warnings: List[str] = []

        # 1. Weigh
        with stage("weighing"):
            M = float(source.weigh())
            logger.info(
                f"Measured M = {M:.6g} kg; initial guess {M / self.model.n_p:.4g} kg per particle, zero friction"
            )

        # 2. Action set
        with stage("action set"):
            S = enumerate_actions(self.model, config=self.action_config)

        # 3. Pivot sweeps
        with stage("pivot inertia"):
            pivots = self._sample_pivots(rng)
            sweeps = self._run_sweeps(source, pivots)
            samples = [self._fit_pivot(pivot, sweeps[pivot]) for pivot in pivots]

        # 4. Center of mass and central inertia
        with stage("center of mass"):
            c, I_cm, com_residual = solve_com_inertia(samples, M)

        # 5. Rank-guided sampling
        with stage("action sampling"):
            selected = sample_actions(
                S,
                self.maps.n_s,
                rng,
                self.config.max_extra,
                self.model,
                self.maps,
                M,
                c,
                rank_tol=self.config.rank_tol,
                config=self.sim_config,
            )
            observations = [self._observe(source, action) for action in selected]

        return Dataset(
            measured_mass=M,
            actions=S,
            pivots=pivots,
            sweeps=sweeps,
            pivot_samples=samples,
            c=c,
            I_cm=I_cm,
            com_residual=com_residual,
            selected=selected,
            observations=observations,
            warnings=warnings,
        )

    def _sample_pivots(self, rng: np.random.Generator) -> List[int]:
        graspable = self.model.graspable_indices
        k = min(self.config.k_inertia, len(graspable))
        if k < 3 or not check_not_collinear(self.model.positions[graspable]):
            raise DegenerateGeometryError(
                f"need 3 or more non-collinear graspable pivots, model has {len(graspable)}"
            )
        for _ in range(self.config.pivot_resamples):
            pivots = [int(p) for p in rng.choice(graspable, size=k, replace=False)]
            if check_not_collinear(self.model.positions[pivots]):
                logger.info(f"Pivots for inertia sweeps: {pivots}")
                return pivots
        raise DegenerateGeometryError(
            f"no non-collinear pivot set found in {self.config.pivot_resamples} draws"
        )

    def sweep_actions(self, pivot: int) -> List[ActionSpec]:
        """Rotations about one pivot at torque levels spread around the nominal sweep."""
        levels = self.config.torque_levels
        spread = self.config.torque_spread
        factors = 1.0 + spread * np.linspace(-1.0, 1.0, levels) if levels > 1 else np.ones(1)
        return [
            rotate(
                pivot,
                self.action_config.rotate_rate,
                self.config.sweep_duration,
                accel=float(self.config.sweep_accel * f),
            )
            for f in factors
        ]

    def _run_sweeps(self, source: ObservationSource, pivots: List[int]) -> Dict[int, List[Observation]]:
        def sweep(pivot: int) -> List[Observation]:
            return [self._observe(source, a) for a in self.sweep_actions(pivot)]

        if self.config.workers > 1:
            with ThreadPoolExecutor(max_workers=self.config.workers) as executor:
                results = list(executor.map(sweep, pivots))
        else:
            results = [sweep(p) for p in pivots]
        return dict(zip(pivots, results))

    def _observe(self, source: ObservationSource, action: ActionSpec) -> Observation:
        observation = source.observe(action)
        return Observation(action, smooth_trajectory(observation.trajectory, action))

    def _fit_pivot(self, pivot: int, observations: List[Observation]) -> PivotInertiaSample:
        pairs = [
            (float(np.mean(o.trajectory.wrenches[:, 2])), fitted_angular_accel(o.trajectory))
            for o in observations
        ]
        position = observations[0].trajectory.poses[0, :2]
        sample = fit_pivot_inertia(pairs, pivot_particle=pivot, pivot_position=position)
        logger.debug(f"Pivot {pivot}: I = {sample.I_j:.6g} (residual {sample.residual:.3g})")
        return sample

    # =========================================================================
    # Estimation
    # =========================================================================

    def estimate(self, dataset: Dataset, object_name: str = "") -> EstimationReport:
        """Friction and mass stages on collected data."""
        M, I_cm, c = dataset.measured_mass, dataset.I_cm, dataset.c
        warnings = list(dataset.warnings)
        gravity = self.sim_config.gravity

        # 6. Friction magnitudes
        with stage("friction"):
            A, B, deltas = regression_blocks(
                [o.trajectory for o in dataset.observations], self.model, self.maps, M, I_cm, c
            )
            closed = estimate_s_lsq(A, B, deltas, self.config.rank_tol)
            warnings.extend(closed.warnings)
            logger.info(f"Closed-form s = {np.round(closed.s, 6).tolist()}")
            descent = estimate_s_gd(np.zeros(self.maps.n_s), A, B, deltas, self.config)
            s = descent.s
            if np.any(s < 0):
                warnings.append(f"clipped negative friction magnitudes {s[s < 0].tolist()}")
                s = np.clip(s, 0.0, None)

        # 7. Masses and friction coefficients
        with stage("mass recovery"):
            H = HiddenStates(M=M, I_cm=I_cm, c=c, s=s)
            recovery = recover_m(H, self.model, self.maps, gravity)
            mu = recover_mu(s, recovery.m, self.maps, gravity)

        actions = dataset.training_actions()
        return EstimationReport(
            method=METHOD_NAME,
            object_name=object_name,
            seed=self.seed,
            hidden_states=HiddenStatesReport(M=M, I_cm=I_cm, c=c.tolist(), s=s.tolist()),
            masses=recovery.m.tolist(),
            mus=mu.tolist(),
            loss=descent.trace[-1],
            residuals={
                "pivot_fit": max(p.residual for p in dataset.pivot_samples),
                "center_of_mass": dataset.com_residual,
                "friction": descent.trace[-1],
                "friction_closed_form": closed.loss,
                "mass": recovery.residual,
                "mass_condition": recovery.cond,
            },
            actions=actions,
            pivots=[
                PivotReport(
                    pivot_particle=p.pivot_particle,
                    I_j=p.I_j,
                    residual=p.residual,
                    pivot_position=p.pivot_position.tolist(),
                    intercept=p.intercept,
                )
                for p in dataset.pivot_samples
            ],
            loss_trace=descent.trace,
            s_closed_form=closed.s.tolist(),
            iterations=descent.iterations,
            converged=descent.converged,
            learning_rate=descent.learning_rate,
            halvings=descent.halvings,
            warnings=warnings,
        )

    def run(self, source: ObservationSource, object_name: str = "") -> EstimationReport:
        start_time = time.time()
        report = self.estimate(self.collect(source), object_name)
        report.runtime = time.time() - start_time
        logger.info(f"Estimated masses {np.round(report.masses, 4).tolist()} in {report.runtime:.2f}s")
        return report


def run_pipeline(
    model: ParticleModel,
    maps: GroupMaps,
    source: ObservationSource,
    config: Optional[EstimatorConfig] = None,
    seed: int = 0,
    action_config: Optional[ActionConfig] = None,
    sim_config: Optional[SimConfig] = None,
    object_name: str = "",
) -> EstimationReport:
    """Collect data from the source and estimate the mass distribution."""
    estimator = HiddenStatesEstimator(model, maps, config, action_config, sim_config, seed)
    return estimator.run(source, object_name)
