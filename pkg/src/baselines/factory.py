"""
Factory functions for creating search methods and running them on observed data.
"""
import logging
import time
from typing import List, Optional, Sequence

from src.actions.spec import ActionSpec
from src.baselines.base import Bounds, SearchMethod
from src.baselines.loss import JointLoss
from src.config import SearchConfig, SimConfig
from src.models.groups import GroupMaps, ObjectParams, hidden_states_of
from src.models.particles import ParticleModel
from src.physics.trajectory import Trajectory
from src.schemas.reports import EstimationReport, HiddenStatesReport


logger = logging.getLogger(__name__)

BASELINE_METHODS: List[str] = ["random", "weighted", "explicit"]


def get_search_method(method_name: str) -> SearchMethod:
    """
    Get a search method by name.

    Args:
        method_name: "random", "weighted" or "explicit"

    Returns:
        SearchMethod instance
    """
    if method_name == "random":
        from src.baselines.random_search import RandomSearch
        return RandomSearch()
    elif method_name == "weighted":
        from src.baselines.weighted_sampling import WeightedSamplingSearch
        return WeightedSamplingSearch()
    elif method_name == "explicit":
        from src.baselines.explicit_state import ExplicitStateSearch
        return ExplicitStateSearch()
    else:
        raise ValueError(f"Unknown search method: {method_name}")


def run_baseline(
    method_name: str,
    trajectories: Sequence[Trajectory],
    model: ParticleModel,
    maps: GroupMaps,
    config: Optional[SearchConfig] = None,
    sim_config: Optional[SimConfig] = None,
    object_name: str = "",
    actions: Optional[Sequence[ActionSpec]] = None,
) -> EstimationReport:
    """
    Run one baseline on observed trajectories.

    Returns:
        EstimationReport tagged with the method name
    """
    config = config or SearchConfig()
    sim_config = sim_config or SimConfig()
    method = get_search_method(method_name)
    start_time = time.time()

    # 1. Loss and search box
    loss = JointLoss(model, maps, trajectories, sim_config)
    bounds = Bounds(maps.n_m, maps.n_mu, config)

    # 2. Search
    result = method.search(loss, bounds, config)

    # 3. Derived Hidden States for the report
    H = hidden_states_of(model, maps, ObjectParams(m=result.m, mu=result.mu), sim_config.gravity)
    runtime = time.time() - start_time
    logger.info(f"{method.method_name}: masses {result.m.round(4).tolist()} in {runtime:.2f}s")

    return EstimationReport(
        method=method.method_name,
        object_name=object_name,
        seed=config.seed,
        hidden_states=HiddenStatesReport(M=H.M, I_cm=H.I_cm, c=H.c.tolist(), s=H.s.tolist()),
        masses=result.m.tolist(),
        mus=result.mu.tolist(),
        loss=result.loss,
        residuals={"loss": result.loss, "evaluations": float(result.evaluations)},
        loss_trace=result.trace,
        iterations=len(result.trace),
        variant=result.variant,
        actions=list(actions or []),
        runtime=runtime,
    )
