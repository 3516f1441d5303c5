"""
Robot action vocabulary: grasp-and-slide and grasp-and-rotate.
"""
import json
import math
from enum import Enum
from pathlib import Path
from typing import List, Optional, Tuple, Union

from pydantic import ConfigDict, Field, TypeAdapter, ValidationError, model_validator

from src.config import ActionConfig
from src.errors import EmptyActionSetError, InvalidShapeError, ReportIOError
from src.models.particles import ParticleModel
from src.schemas.base import BaseSchema


class ActionKind(str, Enum):
    """Action primitives."""
    SLIDE = "slide"
    ROTATE = "rotate"


class ActionSpec(BaseSchema):
    """
    One robot action.

    Slides move at constant velocity `speed * direction`. Rotations turn about the
    grasped particle starting at `angular_rate` (rad/s, clockwise positive) with a
    constant `angular_accel` (rad/s^2, zero for the constant-rate sweep).
    """

    model_config = ConfigDict(frozen=True)

    kind: ActionKind
    grasp_particle: int = Field(ge=0)
    duration: float = Field(gt=0)
    direction: Optional[Tuple[float, float]] = None
    speed: Optional[float] = Field(None, gt=0)
    angular_rate: Optional[float] = None
    angular_accel: float = 0.0

    @model_validator(mode="after")
    def _check_kind(self) -> "ActionSpec":
        if self.kind == ActionKind.SLIDE:
            if self.direction is None or self.speed is None:
                raise ValueError("slide actions need a direction and a speed")
            norm = math.hypot(*self.direction)
            if abs(norm - 1.0) > 1e-12:
                raise ValueError(f"slide direction must be unit-norm, got norm {norm}")
            if self.angular_rate is not None or self.angular_accel != 0.0:
                raise ValueError("slide actions take no angular rate")
        else:
            if self.angular_rate is None:
                raise ValueError("rotate actions need an angular rate")
            if self.direction is not None or self.speed is not None:
                raise ValueError("rotate actions take no direction or speed")
        return self

    @property
    def is_rotate(self) -> bool:
        return self.kind == ActionKind.ROTATE

    def steps(self, dt: float) -> int:
        return max(1, int(round(self.duration / dt)))

    def validate_for(self, model: ParticleModel) -> None:
        if self.grasp_particle >= model.n_p:
            raise InvalidShapeError(f"grasp particle {self.grasp_particle} out of range")
        if not model.graspable_mask[self.grasp_particle]:
            raise InvalidShapeError(f"particle {self.grasp_particle} is not graspable")

    def label(self) -> str:
        if self.is_rotate:
            return (
                f"rotate@{self.grasp_particle}"
                f"({math.degrees(self.angular_rate):+.1f}deg/s, {self.angular_accel:+.4f}rad/s2)"
            )
        return (
            f"slide@{self.grasp_particle}"
            f"(({self.direction[0]:+.3f},{self.direction[1]:+.3f}) x {self.speed}m/s)"
        )


def slide(grasp: int, angle: float, speed: float, duration: float) -> ActionSpec:
    return ActionSpec(
        kind=ActionKind.SLIDE,
        grasp_particle=grasp,
        direction=(math.cos(angle), math.sin(angle)),
        speed=speed,
        duration=duration,
    )


def rotate(grasp: int, rate: float, duration: float, accel: float = 0.0) -> ActionSpec:
    return ActionSpec(
        kind=ActionKind.ROTATE,
        grasp_particle=grasp,
        angular_rate=rate,
        angular_accel=accel,
        duration=duration,
    )


def enumerate_actions(
    model: ParticleModel,
    slide_directions: Optional[int] = None,
    config: Optional[ActionConfig] = None,
) -> List[ActionSpec]:
    """
    Build the action set S.

    Per graspable particle: a rotation in each sense, then `slide_directions` evenly
    spaced slides.
    """
    config = config or ActionConfig()
    n_dirs = config.slide_directions if slide_directions is None else slide_directions
    grasps = model.graspable_indices
    if len(grasps) == 0:
        raise EmptyActionSetError("the model has no graspable particles")

    actions: List[ActionSpec] = []
    for g in grasps:
        g = int(g)
        actions.append(rotate(g, config.rotate_rate, config.rotate_duration))
        actions.append(rotate(g, -config.rotate_rate, config.rotate_duration))
        for k in range(n_dirs):
            actions.append(slide(g, 2.0 * math.pi * k / n_dirs, config.slide_speed, config.slide_duration))
    return actions


_ACTION_LIST = TypeAdapter(List[ActionSpec])


def save_actions(actions: List[ActionSpec], path: Union[str, Path]) -> None:
    try:
        Path(path).write_bytes(_ACTION_LIST.dump_json(actions, indent=2, exclude_none=True))
    except OSError as e:
        raise ReportIOError(f"Cannot write action file {path}: {e}") from e


def load_actions(path: Union[str, Path]) -> List[ActionSpec]:
    """Read a JSON list of actions (a single action object is accepted too)."""
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = json.load(f)
    except OSError as e:
        raise ReportIOError(f"Cannot read action file {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise InvalidShapeError(f"Invalid action file {path}: {e}") from e
    if isinstance(data, dict):
        data = [data]
    try:
        return _ACTION_LIST.validate_python(data)
    except ValidationError as e:
        raise InvalidShapeError(f"Invalid action file {path}: {e}") from e
