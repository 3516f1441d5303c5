"""
Explicit-state gradient descent directly on (m, mu).
"""
import logging
from typing import Dict, List, Tuple

import numpy as np

from src.baselines.base import Bounds, SearchMethod, SearchResult
from src.baselines.loss import JointLoss
from src.baselines.optimizers import AdamStep, GradientStep, MomentumStep, ProjectedRule, RMSPropStep
from src.config import SearchConfig
from src.errors import DivergenceError


logger = logging.getLogger(__name__)


def make_rules(z0: np.ndarray, config: SearchConfig) -> Dict[str, ProjectedRule]:
    return {
        "sgd": GradientStep(z0, config.sgd_stepsize),
        "momentum": MomentumStep(z0, config.sgd_stepsize, momentum=config.momentum),
        "adam": AdamStep(z0, config.adam_stepsize),
        "rmsprop": RMSPropStep(z0, config.adam_stepsize, decay=config.rmsprop_decay),
    }


def _descend(
    loss: JointLoss,
    bounds: Bounds,
    rule: ProjectedRule,
    iters: int,
    scale: float,
) -> Tuple[np.ndarray, float, List[float]]:
    """Projected descent in normalized coordinates z = (theta - lower) / width."""
    width = bounds.width
    best_theta, best_loss = None, np.inf
    trace: List[float] = []
    for iteration in range(iters):
        theta = bounds.lower + rule.z * width
        value, grad = loss.value_and_grad(theta)
        if not np.isfinite(value) or not np.all(np.isfinite(grad)):
            raise DivergenceError(f"non-finite loss or gradient at iteration {iteration}", step=iteration)
        trace.append(value)
        if value < best_loss:
            best_theta, best_loss = theta, value
        rule.step(grad * width / scale)
    return best_theta, float(best_loss), trace


def explicit_state_gd(loss: JointLoss, bounds: Bounds, config: SearchConfig) -> SearchResult:
    """
    Gradient descent on the joint loss with several update rules.

    Every rule starts at the center of the bounds, runs `iters` projected steps on the
    loss normalized by its initial value, and the rule with the lowest loss wins.

    Returns:
        SearchResult of the best rule; its trace is that rule's loss per iteration
    """
    z0 = np.full(bounds.dimension, 0.5)
    scale = loss.value(bounds.lower + z0 * bounds.width)
    scale = scale if scale > 0 else 1.0

    rules = make_rules(z0, config)
    results = []
    for name, rule in rules.items():
        theta, value, trace = _descend(loss, bounds, rule, config.iters, scale)
        logger.debug(f"Explicit state ({name}): best loss {value:.6g}")
        results.append((value, name, theta, trace))

    value, name, theta, trace = min(results, key=lambda r: r[0])
    m, mu = bounds.split(theta)
    logger.info(f"Explicit state: best variant {name}, loss {value:.6g}")
    return SearchResult(
        m=m,
        mu=mu,
        loss=value,
        trace=trace,
        evaluations=1 + len(rules) * config.iters,
        variant=name,
    )


class ExplicitStateSearch(SearchMethod):
    """Projected gradient descent on (m, mu) through the analytic dynamics."""

    @property
    def method_name(self) -> str:
        return "explicit"

    def search(self, loss, bounds: Bounds, config: SearchConfig) -> SearchResult:
        return explicit_state_gd(loss, bounds, config)
