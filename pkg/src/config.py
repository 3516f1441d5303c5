"""
Application configuration.

Settings are read from constructor arguments and, optionally, a dotenv-format file
passed with the CLI's --config option. Process environment variables are ignored so
every run is fully determined by its arguments, config file and seed.
"""
import math
from functools import lru_cache
from typing import Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


# =============================================================================
# Domain configs (immutable, validated)
# =============================================================================

class FrozenConfig(BaseModel):
    """Base for immutable config objects."""

    model_config = ConfigDict(frozen=True, extra="forbid")


class SimConfig(FrozenConfig):
    """Integrator and friction settings shared by simulation and estimation."""

    dt: float = Field(0.01, gt=0)
    gravity: float = Field(9.81, gt=0)
    velocity_epsilon: float = Field(1e-6, ge=0)


class ActionConfig(FrozenConfig):
    """Default action vocabulary: slides and pivot rotations."""

    slide_speed: float = Field(0.05, gt=0)  # m/s
    slide_duration: float = Field(4.0, gt=0)  # s
    slide_directions: int = Field(4, ge=1)
    rotate_rate: float = Field(math.radians(10.0), gt=0)  # rad/s
    rotate_duration: float = Field(18.0, gt=0)  # s


class EstimatorConfig(FrozenConfig):
    """Multi-stage estimator settings."""

    learning_rate: Optional[float] = Field(None, gt=0)  # None = optimal fixed step
    preconditioner: Literal["cholesky", "diagonal", "none"] = "cholesky"
    max_iters: int = Field(500, ge=1)
    convergence_tol: float = Field(1e-10, ge=0)
    rank_tol: float = Field(1e-8, gt=0)
    k_inertia: int = Field(4, ge=3)
    pivot_resamples: int = Field(20, ge=1)
    torque_levels: int = Field(3, ge=1)
    torque_spread: float = Field(0.5, ge=0, lt=1)
    sweep_duration: float = Field(2.0, gt=0)  # s
    sweep_accel: float = Field(math.radians(20.0), gt=0)  # rad/s^2, nominal sweep acceleration
    max_extra: int = Field(10, ge=0)
    workers: int = Field(1, ge=1)


class SearchConfig(FrozenConfig):
    """Joint (m, mu) search settings for the baseline methods."""

    mass_bounds: Tuple[float, float] = (0.01, 5.0)
    mu_bounds: Tuple[float, float] = (0.0, 1.0)
    iters: int = Field(500, ge=1)
    seed: int = 0
    gaussian_decay: float = Field(0.95, gt=0, le=1)
    population: int = Field(8, ge=1)
    grid_fraction: float = Field(0.1, gt=0, le=1)
    initial_sigma_fraction: float = Field(0.5, gt=0)
    sgd_stepsize: float = Field(0.05, gt=0)
    momentum: float = Field(0.9, ge=0, lt=1)
    adam_stepsize: float = Field(0.05, gt=0)
    rmsprop_decay: float = Field(0.9, gt=0, lt=1)
    workers: int = Field(1, ge=1)

    @model_validator(mode="after")
    def _check_bounds(self) -> "SearchConfig":
        for name, (lo, hi) in (("mass_bounds", self.mass_bounds), ("mu_bounds", self.mu_bounds)):
            if lo < 0 or hi <= lo:
                raise ValueError(f"{name} must be non-negative and ordered, got ({lo}, {hi})")
        if self.mass_bounds[0] <= 0:
            raise ValueError("mass_bounds lower limit must be positive")
        return self


# =============================================================================
# Settings
# =============================================================================

class Settings(BaseSettings):
    """All tunable defaults, overridable from a dotenv-format config file."""

    # Simulation
    dt: float = 0.01
    gravity: float = 9.81
    velocity_epsilon: float = 1e-6

    # Actions
    slide_speed: float = 0.05
    slide_duration: float = 4.0
    slide_directions: int = 4
    rotate_rate_deg: float = 10.0
    rotate_duration: float = 18.0

    # Estimator
    learning_rate: Optional[float] = None
    preconditioner: Literal["cholesky", "diagonal", "none"] = "cholesky"
    max_iters: int = 500
    convergence_tol: float = 1e-10
    rank_tol: float = 1e-8
    k_inertia: int = 4
    torque_levels: int = 3
    torque_spread: float = 0.5
    sweep_duration: float = 2.0
    sweep_accel_deg: float = 20.0
    max_extra: int = 10

    # Baselines
    search_iters: int = 500
    population: int = 8
    gaussian_decay: float = 0.95
    mass_min: float = 0.01
    mass_max: float = 5.0
    mu_min: float = 0.0
    mu_max: float = 1.0

    # Harness
    heldout_actions: int = 3
    heldout_substeps: int = 10
    workers: int = 1
    log_level: str = "INFO"

    model_config = SettingsConfigDict(
        env_file=None,
        env_file_encoding="utf-8",
        extra="ignore",
    )

    @classmethod
    def settings_customise_sources(
        cls,
        settings_cls,
        init_settings,
        env_settings,
        dotenv_settings,
        file_secret_settings,
    ):
        # Constructor arguments and the explicit config file only
        return init_settings, dotenv_settings

    def sim_config(self, dt: Optional[float] = None) -> SimConfig:
        return SimConfig(
            dt=self.dt if dt is None else dt,
            gravity=self.gravity,
            velocity_epsilon=self.velocity_epsilon,
        )

    def action_config(self) -> ActionConfig:
        return ActionConfig(
            slide_speed=self.slide_speed,
            slide_duration=self.slide_duration,
            slide_directions=self.slide_directions,
            rotate_rate=math.radians(self.rotate_rate_deg),
            rotate_duration=self.rotate_duration,
        )

    def estimator_config(
        self,
        max_iters: Optional[int] = None,
        learning_rate: Optional[float] = None,
    ) -> EstimatorConfig:
        return EstimatorConfig(
            learning_rate=learning_rate if learning_rate is not None else self.learning_rate,
            preconditioner=self.preconditioner,
            max_iters=max_iters or self.max_iters,
            convergence_tol=self.convergence_tol,
            rank_tol=self.rank_tol,
            k_inertia=self.k_inertia,
            torque_levels=self.torque_levels,
            torque_spread=self.torque_spread,
            sweep_duration=self.sweep_duration,
            sweep_accel=math.radians(self.sweep_accel_deg),
            max_extra=self.max_extra,
            workers=self.workers,
        )

    def search_config(self, seed: int = 0, iters: Optional[int] = None) -> SearchConfig:
        return SearchConfig(
            mass_bounds=(self.mass_min, self.mass_max),
            mu_bounds=(self.mu_min, self.mu_max),
            iters=iters or self.search_iters,
            seed=seed,
            gaussian_decay=self.gaussian_decay,
            population=self.population,
            workers=self.workers,
        )


@lru_cache()
def get_settings(config_file: Optional[str] = None) -> Settings:
    """Get cached settings instance (one per config file)."""
    if config_file:
        return Settings(_env_file=config_file)
    return Settings()
