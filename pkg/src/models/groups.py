"""
Parameter grouping, physical parameters and the Hidden States derived from them.
"""
from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np

from src.errors import InconsistentGroupingError, InvalidParametersError
from src.models.particles import ParticleModel, _frozen


NO_GROUP = -1


def _check_used(assignment: np.ndarray, count: int, name: str) -> None:
    used = set(int(g) for g in assignment if g >= 0)
    if any(g >= count for g in used):
        raise InconsistentGroupingError(f"{name} index out of range [0, {count})")
    if used != set(range(count)):
        raise InconsistentGroupingError(f"every {name} index in [0, {count}) must be used")


def _mapping_matrix(assignment: np.ndarray, count: int) -> np.ndarray:
    matrix = np.zeros((count, len(assignment)))
    for i, g in enumerate(assignment):
        if g >= 0:
            matrix[g, i] = 1.0
    return matrix


@dataclass(frozen=True, eq=False)
class GroupMaps:
    """
    Per-particle group assignments for mass, friction and contact force.

    Non-contact particles carry NO_GROUP (-1) in the friction and contact assignments.
    """
    mass_assignment: np.ndarray
    friction_assignment: np.ndarray
    contact_assignment: np.ndarray

    def __post_init__(self):
        mass = np.asarray(self.mass_assignment, dtype=int)
        friction = np.asarray(self.friction_assignment, dtype=int)
        contact = np.asarray(self.contact_assignment, dtype=int)
        n = len(mass)
        if friction.shape != (n,) or contact.shape != (n,):
            raise InconsistentGroupingError("group assignments must have one entry per particle")
        if np.any(mass < 0):
            raise InconsistentGroupingError("every particle needs a mass group")
        if np.any((friction >= 0) != (contact >= 0)):
            raise InconsistentGroupingError(
                "friction and contact assignments must agree on which particles touch the table"
            )
        object.__setattr__(self, "mass_assignment", _frozen(mass))
        object.__setattr__(self, "friction_assignment", _frozen(friction))
        object.__setattr__(self, "contact_assignment", _frozen(contact))
        _check_used(mass, self.n_m, "mass group")
        _check_used(friction, self.n_mu, "friction group")
        _check_used(contact, self.n_s, "contact group")

    @classmethod
    def from_assignments(
        cls,
        mass: Sequence[int],
        friction: Sequence[int],
        contact: Optional[Sequence[int]] = None,
    ) -> "GroupMaps":
        """
        Build maps, deriving contact groups when not given.

        Derived contact groups are the distinct (friction, mass) pairs of contacting
        particles, numbered in order of first appearance.
        """
        mass = np.asarray(mass, dtype=int)
        friction = np.asarray(friction, dtype=int)
        if contact is None:
            pairs = {}
            derived = []
            for e, f in zip(mass, friction):
                if f < 0:
                    derived.append(NO_GROUP)
                    continue
                key = (int(f), int(e))
                if key not in pairs:
                    pairs[key] = len(pairs)
                derived.append(pairs[key])
            contact = derived
        return cls(mass, friction, np.asarray(contact, dtype=int))

    @property
    def n_particles(self) -> int:
        return int(len(self.mass_assignment))

    @property
    def n_m(self) -> int:
        return int(self.mass_assignment.max()) + 1

    @property
    def n_mu(self) -> int:
        return int(self.friction_assignment.max()) + 1 if len(self.friction_assignment) else 0

    @property
    def n_s(self) -> int:
        return int(self.contact_assignment.max()) + 1 if len(self.contact_assignment) else 0

    @property
    def G_m(self) -> np.ndarray:
        return _mapping_matrix(self.mass_assignment, self.n_m)

    @property
    def G_mu(self) -> np.ndarray:
        return _mapping_matrix(self.friction_assignment, self.n_mu)

    @property
    def G_s(self) -> np.ndarray:
        return _mapping_matrix(self.contact_assignment, self.n_s)

    def group_counts(self) -> np.ndarray:
        """Particle count per mass group."""
        return np.bincount(self.mass_assignment, minlength=self.n_m)

    def contact_group_members(self, k: int) -> np.ndarray:
        return np.flatnonzero(self.contact_assignment == k)

    def contact_group_mass(self) -> np.ndarray:
        """Mass group of each contact group (checked to be unique)."""
        return self._contact_group_parent(self.mass_assignment, "mass")

    def contact_group_friction(self) -> np.ndarray:
        """Friction group of each contact group (checked to be unique)."""
        return self._contact_group_parent(self.friction_assignment, "friction")

    def _contact_group_parent(self, assignment: np.ndarray, name: str) -> np.ndarray:
        parents: List[int] = []
        for k in range(self.n_s):
            groups = np.unique(assignment[self.contact_group_members(k)])
            if len(groups) != 1:
                raise InconsistentGroupingError(
                    f"contact group {k} spans {name} groups {groups.tolist()}"
                )
            parents.append(int(groups[0]))
        return np.asarray(parents, dtype=int)

    def validate_for(self, model: ParticleModel) -> None:
        if self.n_particles != model.n_p:
            raise InconsistentGroupingError(
                f"maps cover {self.n_particles} particles, model has {model.n_p}"
            )
        if np.any((self.contact_assignment >= 0) != model.contact_mask):
            raise InconsistentGroupingError("contact assignment disagrees with the contact mask")


@dataclass(frozen=True, eq=False)
class ObjectParams:
    """Per-group masses (kg) and sliding friction coefficients."""
    m: np.ndarray
    mu: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.m, dtype=float).reshape(-1)
        mu = np.asarray(self.mu, dtype=float).reshape(-1)
        if np.any(~np.isfinite(m)) or np.any(m <= 0):
            raise InvalidParametersError(f"masses must be positive, got {m.tolist()}")
        if np.any(~np.isfinite(mu)) or np.any(mu < 0):
            raise InvalidParametersError(f"friction coefficients must be non-negative, got {mu.tolist()}")
        object.__setattr__(self, "m", _frozen(m))
        object.__setattr__(self, "mu", _frozen(mu))

    def validate_for(self, maps: GroupMaps) -> None:
        if len(self.m) != maps.n_m or len(self.mu) != maps.n_mu:
            raise InvalidParametersError(
                f"expected {maps.n_m} masses and {maps.n_mu} friction coefficients, "
                f"got {len(self.m)} and {len(self.mu)}"
            )


@dataclass(frozen=True, eq=False)
class HiddenStates:
    """
    Object-level and particle-level derived parameters.

    Attributes:
        M: total mass (kg)
        I_cm: moment of inertia about the center of mass (kg m^2)
        c: body-frame center of mass (m)
        s: friction force magnitude per contact group (N)
    """
    M: float
    I_cm: float
    c: np.ndarray
    s: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "M", float(self.M))
        object.__setattr__(self, "I_cm", float(self.I_cm))
        object.__setattr__(self, "c", _frozen(np.asarray(self.c, dtype=float).reshape(2)))
        object.__setattr__(self, "s", _frozen(np.asarray(self.s, dtype=float).reshape(-1)))

    def with_s(self, s) -> "HiddenStates":
        return HiddenStates(self.M, self.I_cm, self.c, s)

    def particle_friction(self, maps: GroupMaps) -> np.ndarray:
        """Per-particle friction magnitude, zero off contact."""
        contact = maps.contact_assignment
        out = np.zeros(len(contact))
        touching = contact >= 0
        out[touching] = self.s[contact[touching]]
        return out


def particle_masses(maps: GroupMaps, m) -> np.ndarray:
    return np.asarray(m, dtype=float)[maps.mass_assignment]


def hidden_states_of(
    model: ParticleModel,
    maps: GroupMaps,
    params: ObjectParams,
    gravity: float = 9.81,
) -> HiddenStates:
    """
    Compute (M, I_cm, c, s) from per-group masses and friction coefficients.

    Each contact group must sit inside a single mass group and a single friction
    group so that its friction magnitude mu * m * g is one scalar.
    """
    maps.validate_for(model)
    params.validate_for(maps)

    masses = particle_masses(maps, params.m)
    M = float(masses.sum())
    c = masses @ model.positions / M
    offsets = model.positions - c
    I_cm = float(masses @ np.einsum("ij,ij->i", offsets, offsets))

    mass_of = maps.contact_group_mass()
    friction_of = maps.contact_group_friction()
    s = params.mu[friction_of] * params.m[mass_of] * gravity if maps.n_s else np.zeros(0)

    return HiddenStates(M=M, I_cm=I_cm, c=c, s=s)
