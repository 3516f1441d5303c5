"""
Friction-magnitude estimation on the stacked regression model.

L(s) = sum_t |A_t s + B_t + v_t - v_{t+1}|^2 is quadratic in s; it is minimized either in
closed form or by preconditioned gradient descent.
"""
import logging
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np
from scipy.linalg import LinAlgError, cho_factor, cho_solve, cholesky, solve_triangular

from src.actions.regression import rank_Q
from src.config import EstimatorConfig
from src.errors import RankDeficientError


logger = logging.getLogger(__name__)


@dataclass
class LeastSquaresResult:
    s: np.ndarray
    loss: float
    warnings: List[str] = field(default_factory=list)


@dataclass
class GradientDescentResult:
    s: np.ndarray
    trace: List[float]
    iterations: int
    converged: bool
    learning_rate: float
    halvings: List[float] = field(default_factory=list)


def loss_and_grad(
    s: np.ndarray,
    A: np.ndarray,
    B: np.ndarray,
    deltas: np.ndarray,
) -> Tuple[float, np.ndarray]:
    """Loss and its exact gradient 2 A^T (A s + B - deltas)."""
    residual = A @ s + B - deltas
    return float(residual @ residual), 2.0 * (A.T @ residual)


def estimate_s_lsq(
    A: np.ndarray,
    B: np.ndarray,
    deltas: np.ndarray,
    rank_tol: float = 1e-8,
) -> LeastSquaresResult:
    """
    Closed-form minimizer through the normal equations (Cholesky solve).

    Components in [-tol, 0) are clamped to zero; more negative components are kept and
    reported as a model-mismatch warning.
    """
    n_s = A.shape[1]
    if n_s == 0:
        return LeastSquaresResult(s=np.zeros(0), loss=float((B - deltas) @ (B - deltas)))
    rank = rank_Q(A, rank_tol)
    if rank < n_s:
        raise RankDeficientError(f"stacked regression matrix has rank {rank} < n_s = {n_s}", rank=rank)

    s = cho_solve(cho_factor(A.T @ A), A.T @ (deltas - B))
    tol = 1e-9 * max(1.0, float(np.max(np.abs(s))))
    warnings: List[str] = []
    s = np.where((s < 0) & (s >= -tol), 0.0, s)
    if np.any(s < -tol):
        message = f"negative friction magnitudes {s[s < -tol].tolist()} (model mismatch)"
        logger.warning(message)
        warnings.append(message)

    loss, _ = loss_and_grad(s, A, B, deltas)
    return LeastSquaresResult(s=s, loss=loss, warnings=warnings)


def preconditioner_factor(A: np.ndarray, kind: str = "cholesky") -> np.ndarray:
    """
    Factor T of the descent metric T T^T, so the descent runs on s = T z.

    "cholesky" takes T = R^-1 with A^T A = R^T R, which turns the Hessian in z into 2 I;
    "diagonal" scales each column to unit norm; "none" is the identity. A Cholesky
    failure falls back to the diagonal factor.
    """
    n_s = A.shape[1]
    normal = A.T @ A
    if kind == "cholesky":
        try:
            R = cholesky(normal, lower=False)
            return solve_triangular(R, np.eye(n_s), lower=False)
        except LinAlgError:
            logger.warning("A^T A is not positive definite, using the diagonal preconditioner")
            kind = "diagonal"
    if kind == "diagonal":
        diag = np.sqrt(np.diag(normal))
        return np.diag(np.divide(1.0, diag, out=np.ones(n_s), where=diag > 0))
    return np.eye(n_s)


def estimate_s_gd(
    initial: np.ndarray,
    A: np.ndarray,
    B: np.ndarray,
    deltas: np.ndarray,
    config: Optional[EstimatorConfig] = None,
) -> GradientDescentResult:
    """
    Preconditioned gradient descent s <- s - rate * T T^T dL/ds.

    This is plain gradient descent on z with s = T z (see preconditioner_factor). The
    rate must stay below 2 / lambda_max of the Hessian in z, 2 T^T A^T A T; a configured
    rate at or above that bound is halved until stable and every halving is recorded.
    Without a configured rate the optimal fixed step 2 / (lambda_min + lambda_max) is
    used. Stops when |delta s| < convergence_tol or after max_iters steps.
    """
    config = config or EstimatorConfig()
    s = np.asarray(initial, dtype=float).copy()
    loss, grad = loss_and_grad(s, A, B, deltas)
    trace = [loss]
    if s.size == 0:
        return GradientDescentResult(s=s, trace=trace, iterations=0, converged=True, learning_rate=0.0)

    T = preconditioner_factor(A, config.preconditioner)
    metric = T @ T.T
    eigen = np.linalg.eigvalsh(2.0 * T.T @ (A.T @ A) @ T)
    lam_min, lam_max = max(float(eigen[0]), 0.0), float(eigen[-1])
    if lam_max <= 0:
        return GradientDescentResult(s=s, trace=trace, iterations=0, converged=True, learning_rate=0.0)

    halvings: List[float] = []
    if config.learning_rate is None:
        rate = 2.0 / (lam_min + lam_max)
    else:
        rate = config.learning_rate
        while rate >= 2.0 / lam_max:
            halvings.append(rate)
            rate /= 2.0
        if halvings:
            logger.warning(f"Learning rate {config.learning_rate} unstable, halved {len(halvings)} times to {rate:.3g}")

    converged = False
    iterations = 0
    for iterations in range(1, config.max_iters + 1):
        update = rate * (metric @ grad)
        s = s - update
        loss, grad = loss_and_grad(s, A, B, deltas)
        trace.append(loss)
        if np.linalg.norm(update) < config.convergence_tol:
            converged = True
            break

    if converged:
        logger.info(f"Gradient descent converged in {iterations} iterations, L = {loss:.3e}")
    else:
        logger.warning(f"Gradient descent stopped after {iterations} iterations, L = {loss:.3e}")
    return GradientDescentResult(
        s=s,
        trace=trace,
        iterations=iterations,
        converged=converged,
        learning_rate=rate,
        halvings=halvings,
    )
