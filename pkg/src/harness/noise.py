"""
Sensor noise presets.
"""
import math
from typing import Dict, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from src.errors import InputError


class NoiseModel(BaseModel):
    """Gaussian noise on wrench readings, observed poses and the weighing scale."""

    model_config = ConfigDict(frozen=True)

    wrench_sigma: Tuple[float, float] = (0.0, 0.0)  # N (force channels), N m (torque)
    pose_sigma: Tuple[float, float] = (0.0, 0.0)  # m (position channels), rad (heading)
    scale_sigma: float = Field(0.0, ge=0)  # kg
    seed: int = 0

    @model_validator(mode="after")
    def _check_sigmas(self) -> "NoiseModel":
        if min(self.wrench_sigma) < 0 or min(self.pose_sigma) < 0:
            raise ValueError("noise deviations must be non-negative")
        return self

    @property
    def is_noiseless(self) -> bool:
        return max(self.wrench_sigma) == 0 and max(self.pose_sigma) == 0 and self.scale_sigma == 0

    def with_seed(self, seed: int) -> "NoiseModel":
        return self.model_copy(update={"seed": seed})


NOISE_PRESETS: Dict[str, NoiseModel] = {
    "none": NoiseModel(),
    "bench": NoiseModel(
        wrench_sigma=(0.05, 0.005),
        pose_sigma=(0.001, math.radians(0.2)),
        scale_sigma=0.001,
    ),
}


def noise_preset(name: str, seed: int = 0) -> NoiseModel:
    if name not in NOISE_PRESETS:
        raise InputError(f"Unknown noise preset: {name} (known: {', '.join(NOISE_PRESETS)})")
    return NOISE_PRESETS[name].with_seed(seed)
