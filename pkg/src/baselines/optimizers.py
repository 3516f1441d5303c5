"""
First-order update rules for the explicit-state baseline.

Each rule owns a point z in the normalized box [lower, upper]^d, moves it against a
gradient and projects it back onto the box after every step.
"""
import numpy as np


class ProjectedRule:
    """Base update rule: z <- clip(z + direction(grad), lower, upper)."""

    def __init__(self, z0, lower: float = 0.0, upper: float = 1.0, eps: float = 1e-8):
        self.z = np.clip(np.array(z0, dtype=float), lower, upper)
        self.lower = lower
        self.upper = upper
        self.eps = eps
        self.steps = 0

    def step(self, grad) -> np.ndarray:
        self.steps += 1
        self.z = np.clip(self.z + self._direction(np.asarray(grad, dtype=float)), self.lower, self.upper)
        return self.z

    def _direction(self, grad: np.ndarray) -> np.ndarray:
        raise NotImplementedError


class GradientStep(ProjectedRule):
    def __init__(self, z0, rate: float, **kwargs):
        super().__init__(z0, **kwargs)
        self.rate = rate

    def _direction(self, grad):
        return -self.rate * grad


class MomentumStep(ProjectedRule):
    """Step along an exponential average of past gradients."""

    def __init__(self, z0, rate: float, momentum: float = 0.9, **kwargs):
        super().__init__(z0, **kwargs)
        self.rate = rate
        self.momentum = momentum
        self.velocity = np.zeros_like(self.z)

    def _direction(self, grad):
        self.velocity = self.momentum * self.velocity + (1.0 - self.momentum) * grad
        return -self.rate * self.velocity


class AdamStep(ProjectedRule):
    """Bias-corrected first and second moment estimates."""

    def __init__(self, z0, rate: float, beta1: float = 0.9, beta2: float = 0.999, **kwargs):
        super().__init__(z0, **kwargs)
        self.rate = rate
        self.beta1 = beta1
        self.beta2 = beta2
        self.first = np.zeros_like(self.z)
        self.second = np.zeros_like(self.z)

    def _direction(self, grad):
        self.first = self.beta1 * self.first + (1.0 - self.beta1) * grad
        self.second = self.beta2 * self.second + (1.0 - self.beta2) * grad**2
        first_hat = self.first / (1.0 - self.beta1**self.steps)
        second_hat = self.second / (1.0 - self.beta2**self.steps)
        return -self.rate * first_hat / (np.sqrt(second_hat) + self.eps)


class RMSPropStep(ProjectedRule):
    def __init__(self, z0, rate: float, decay: float = 0.9, **kwargs):
        super().__init__(z0, **kwargs)
        self.rate = rate
        self.decay = decay
        self.second = np.zeros_like(self.z)

    def _direction(self, grad):
        self.second = self.decay * self.second + (1.0 - self.decay) * grad**2
        return -self.rate * grad / (np.sqrt(self.second) + self.eps)
