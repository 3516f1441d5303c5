"""
Random search: uniform samples within the bounds, keep the best.
"""
import logging
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from src.baselines.base import Bounds, SearchMethod, SearchResult
from src.config import SearchConfig


logger = logging.getLogger(__name__)


def evaluate_population(loss, thetas: np.ndarray, workers: int = 1) -> np.ndarray:
    """Evaluate candidates, results in index order regardless of scheduling."""
    if workers > 1 and len(thetas) > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            return np.array(list(executor.map(loss, thetas)), dtype=float)
    return np.array([loss(theta) for theta in thetas], dtype=float)


def random_search(loss, bounds: Bounds, config: SearchConfig) -> SearchResult:
    """
    Sample `iters` points uniformly and return the argmin.

    Returns:
        SearchResult whose trace is the best loss after each sample
    """
    rng = np.random.default_rng(config.seed)
    samples = bounds.uniform(rng, config.iters)
    losses = evaluate_population(loss, samples, config.workers)
    best = int(np.argmin(losses))
    m, mu = bounds.split(samples[best])
    logger.info(f"Random search: best loss {losses[best]:.6g} at sample {best}/{config.iters}")
    return SearchResult(
        m=m,
        mu=mu,
        loss=float(losses[best]),
        trace=np.minimum.accumulate(losses).tolist(),
        evaluations=len(losses),
    )


class RandomSearch(SearchMethod):
    """Uniform random sampling."""

    @property
    def method_name(self) -> str:
        return "random"

    def search(self, loss, bounds: Bounds, config: SearchConfig) -> SearchResult:
        return random_search(loss, bounds, config)
