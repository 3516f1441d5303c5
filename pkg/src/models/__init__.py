"""
Object model - particle grids, parameter grouping, Hidden States and the built-in catalog.
"""
from src.models.particles import ParticleModel, build_grid_model
from src.models.groups import (
    NO_GROUP,
    GroupMaps,
    ObjectParams,
    HiddenStates,
    hidden_states_of,
    particle_masses,
)
from src.models.catalog import (
    builtin_object,
    catalog_names,
    catalog_descriptor,
    object_from_descriptor,
    descriptor_from_object,
    load_descriptor,
    save_descriptor,
    resolve_object,
)

__all__ = [
    # Particles
    "ParticleModel",
    "build_grid_model",
    # Groups and parameters
    "NO_GROUP",
    "GroupMaps",
    "ObjectParams",
    "HiddenStates",
    "hidden_states_of",
    "particle_masses",
    # Catalog
    "builtin_object",
    "catalog_names",
    "catalog_descriptor",
    "object_from_descriptor",
    "descriptor_from_object",
    "load_descriptor",
    "save_descriptor",
    "resolve_object",
]
