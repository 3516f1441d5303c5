"""
Exception hierarchy.
Every error carries the CLI exit code it maps to and, once it passes through the
estimator pipeline, the stage it was raised in.
"""
from typing import Optional


class MassDistError(Exception):
    """Base class for all domain errors."""

    exit_code: int = 2

    def __init__(self, message: str, stage: Optional[str] = None):
        super().__init__(message)
        self.message = message
        self.stage = stage

    def with_stage(self, stage: str) -> "MassDistError":
        """Tag the error with a pipeline stage (first tag wins)."""
        if self.stage is None:
            self.stage = stage
        return self

    def __str__(self) -> str:
        if self.stage:
            return f"[{self.stage}] {self.message}"
        return self.message


# =============================================================================
# Object model (bad input, exit 1)
# =============================================================================

class InputError(MassDistError, ValueError):
    """Invalid user-supplied object, action or parameter data."""

    exit_code = 1


class InvalidShapeError(InputError):
    pass


class InconsistentGroupingError(InputError):
    pass


class InvalidParametersError(InputError):
    pass


class CatalogError(InputError):
    pass


# =============================================================================
# Dynamics
# =============================================================================

class SingularInertiaError(MassDistError):
    pass


class DivergenceError(MassDistError):
    """Non-finite state or gradient; `step` is the step or iteration index."""

    def __init__(self, message: str, step: int, stage: Optional[str] = None):
        super().__init__(message, stage)
        self.step = step


# =============================================================================
# Actions
# =============================================================================

class EmptyActionSetError(MassDistError):
    pass


class InsufficientDataError(MassDistError):
    pass


class RankDeficientError(MassDistError):
    def __init__(self, message: str, rank: int, stage: Optional[str] = None):
        super().__init__(message, stage)
        self.rank = rank


# =============================================================================
# Estimation
# =============================================================================

class InsufficientExcitationError(MassDistError):
    pass


class NonPhysicalInertiaError(MassDistError):
    pass


class DegenerateGeometryError(MassDistError):
    pass


class InconsistentSamplesError(MassDistError):
    pass


class UnidentifiableMassError(MassDistError):
    def __init__(self, message: str, null_dim: int, stage: Optional[str] = None):
        super().__init__(message, stage)
        self.null_dim = null_dim


# =============================================================================
# Harness
# =============================================================================

class IncompatibleTrajectoriesError(MassDistError):
    pass


class EvaluationError(MassDistError):
    pass


class ReportIOError(MassDistError):
    exit_code = 3
