"""
Base abstract class for joint (m, mu) search methods.
"""
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Callable, List, Optional

import numpy as np

from src.config import SearchConfig


Loss = Callable[[np.ndarray], float]


@dataclass
class SearchResult:
    """Best parameters found by a search."""
    m: np.ndarray
    mu: np.ndarray
    loss: float
    trace: List[float] = field(default_factory=list)
    evaluations: int = 0
    variant: Optional[str] = None


class Bounds:
    """Box bounds over concat(m, mu)."""

    def __init__(self, n_m: int, n_mu: int, config: SearchConfig):
        self.n_m = n_m
        self.n_mu = n_mu
        self.lower = np.array([config.mass_bounds[0]] * n_m + [config.mu_bounds[0]] * n_mu)
        self.upper = np.array([config.mass_bounds[1]] * n_m + [config.mu_bounds[1]] * n_mu)

    @property
    def width(self) -> np.ndarray:
        return self.upper - self.lower

    @property
    def dimension(self) -> int:
        return self.n_m + self.n_mu

    def clip(self, theta: np.ndarray) -> np.ndarray:
        return np.clip(theta, self.lower, self.upper)

    def uniform(self, rng: np.random.Generator, size: int) -> np.ndarray:
        return rng.uniform(self.lower, self.upper, size=(size, self.dimension))

    def split(self, theta: np.ndarray):
        return np.array(theta[: self.n_m]), np.array(theta[self.n_m :])


class SearchMethod(ABC):
    """
    Abstract base class for search methods.
    All baselines minimize the same joint loss within the configured bounds.
    """

    @property
    @abstractmethod
    def method_name(self) -> str:
        """Return the method name."""
        pass

    @abstractmethod
    def search(self, loss, bounds: Bounds, config: SearchConfig) -> SearchResult:
        """
        Minimize the loss.

        Args:
            loss: joint loss over concat(m, mu) (a JointLoss for gradient methods)
            bounds: parameter box
            config: search settings (iterations, seed, ...)

        Returns:
            SearchResult with the best parameters and their loss
        """
        pass
