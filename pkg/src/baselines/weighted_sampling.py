"""
Weighted sampling search: grid initialization, then Gaussian resampling around the
incumbent with a shrinking deviation.
"""
import logging
import math

import numpy as np

from src.baselines.base import Bounds, SearchMethod, SearchResult
from src.baselines.random_search import evaluate_population
from src.config import SearchConfig


logger = logging.getLogger(__name__)


def grid_points(bounds: Bounds, count: int) -> np.ndarray:
    """
    `count` cell centers of a regular grid over the bounds.

    The grid has ceil(count^(1/D)) cells per axis; points are taken at evenly spaced
    flat indices so they cover the whole box.
    """
    D = bounds.dimension
    resolution = max(1, math.ceil(count ** (1.0 / D) - 1e-9))
    total = resolution ** D
    flat = np.unique(np.linspace(0, total - 1, min(count, total)).round().astype(int))
    cells = np.array(np.unravel_index(flat, (resolution,) * D)).T
    return bounds.lower + (cells + 0.5) / resolution * bounds.width


def weighted_sampling_search(loss, bounds: Bounds, config: SearchConfig) -> SearchResult:
    """
    Minimize by grid sampling followed by Gaussian resampling.

    Each iteration draws `population` samples around the incumbent, clipped to the
    bounds, and keeps the incumbent unless a sample improves on it. The deviation starts
    at initial_sigma_fraction * width and shrinks by gaussian_decay per iteration.

    Returns:
        SearchResult whose trace is the incumbent loss after each iteration
    """
    rng = np.random.default_rng(config.seed)
    grid = grid_points(bounds, max(1, math.ceil(config.iters * config.grid_fraction)))
    losses = evaluate_population(loss, grid, config.workers)
    best = int(np.argmin(losses))
    incumbent, incumbent_loss = grid[best], float(losses[best])
    evaluations = len(grid)
    trace = []

    sigma = config.initial_sigma_fraction * bounds.width
    for _ in range(config.iters):
        samples = bounds.clip(incumbent + sigma * rng.standard_normal((config.population, bounds.dimension)))
        sample_losses = evaluate_population(loss, samples, config.workers)
        evaluations += len(samples)
        k = int(np.argmin(sample_losses))
        if sample_losses[k] < incumbent_loss:
            incumbent, incumbent_loss = samples[k], float(sample_losses[k])
        trace.append(incumbent_loss)
        sigma = sigma * config.gaussian_decay

    m, mu = bounds.split(incumbent)
    logger.info(f"Weighted sampling: best loss {incumbent_loss:.6g} after {evaluations} evaluations")
    return SearchResult(m=m, mu=mu, loss=incumbent_loss, trace=trace, evaluations=evaluations)


class WeightedSamplingSearch(SearchMethod):
    """Grid initialization plus shrinking Gaussian resampling."""

    @property
    def method_name(self) -> str:
        return "weighted"

    def search(self, loss, bounds: Bounds, config: SearchConfig) -> SearchResult:
        return weighted_sampling_search(loss, bounds, config)
