"""
Observation source interface.
Defines what the estimator needs from the world: execute an action, weigh the object.
"""
from abc import ABC, abstractmethod
from dataclasses import dataclass

from src.actions.spec import ActionSpec
from src.physics.trajectory import Trajectory


@dataclass(frozen=True)
class Observation:
    """Observed states and filtered wrenches of one executed action."""
    action: ActionSpec
    trajectory: Trajectory


class ObservationSource(ABC):
    """
    Abstract base class for observation sources.
    Repeated queries with the same action must return identical data.
    """

    @property
    @abstractmethod
    def source_name(self) -> str:
        """Return the source name."""
        pass

    @abstractmethod
    def observe(self, action: ActionSpec) -> Observation:
        """
        Execute an action and record it.

        Args:
            action: action to execute

        Returns:
            Observation whose trajectory starts at the canonical placement of the
            grasp particle and carries filtered wrench inputs
        """
        pass

    @abstractmethod
    def weigh(self) -> float:
        """
        Measure the total mass.

        Returns:
            Total mass in kg
        """
        pass
