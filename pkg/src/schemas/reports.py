"""
Estimation report and experiment result schemas.
"""
from typing import Any, Dict, List, Optional

from pydantic import Field

from src.actions.spec import ActionSpec
from src.schemas.base import BaseSchema


class HiddenStatesReport(BaseSchema):
    """Serialized Hidden States."""
    M: float
    I_cm: float
    c: List[float]
    s: List[float]


class PivotReport(BaseSchema):
    """Stage-1 fit for one pivot."""
    pivot_particle: int
    I_j: float
    residual: float
    pivot_position: List[float]
    intercept: float = 0.0


class EstimationReport(BaseSchema):
    """Result of one estimation method on one object."""
    method: str
    object_name: str = ""
    seed: Optional[int] = None
    hidden_states: HiddenStatesReport
    masses: List[float]
    mus: List[float] = Field(default_factory=list)
    loss: Optional[float] = None
    residuals: Dict[str, float] = Field(default_factory=dict)
    actions: List[ActionSpec] = Field(default_factory=list)
    pivots: List[PivotReport] = Field(default_factory=list)
    loss_trace: List[float] = Field(default_factory=list)
    s_closed_form: Optional[List[float]] = None
    iterations: int = 0
    converged: bool = False
    learning_rate: Optional[float] = None
    halvings: List[float] = Field(default_factory=list)
    variant: Optional[str] = None
    warnings: List[str] = Field(default_factory=list)
    runtime: Optional[float] = None

    def used_pivots(self) -> List[int]:
        """Particles grasped by any rotate action of the training data."""
        return sorted({a.grasp_particle for a in self.actions if a.is_rotate})


class ExperimentResult(BaseSchema):
    """One (object, method, seed) cell of an experiment."""
    object_name: str
    method: str
    seed: int
    nad: Optional[float] = Field(None, ge=0)
    mpd: Optional[float] = Field(None, ge=0)
    runtime: Optional[float] = None
    error: Optional[str] = None
    mpd_error: Optional[str] = None
    config: Dict[str, Any] = Field(default_factory=dict)
