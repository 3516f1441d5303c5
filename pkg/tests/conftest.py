"""
Shared fixtures: small hand-checkable objects and catalog objects.
"""
from typing import Tuple

import numpy as np
import pytest

from src.config import SimConfig
from src.models.catalog import builtin_object
from src.models.groups import GroupMaps, ObjectParams
from src.models.particles import ParticleModel, build_grid_model


Triple = Tuple[ParticleModel, GroupMaps, ObjectParams]


def make_two_rod(mu: float = 0.0) -> Triple:
    """Four particles on the x-axis at unit spacing; left pair 1 kg each, right pair 2 kg each."""
    model = build_grid_model([[1, 1, 1, 1]], 1.0)
    maps = GroupMaps.from_assignments([0, 0, 1, 1], [0, 0, 0, 0])
    return model, maps, ObjectParams(m=[1.0, 2.0], mu=[mu])


def make_l_object(mu: float = 0.0) -> Triple:
    """Particles (0,0), (1,0), (2,0), (0,1), 1 kg each."""
    model = build_grid_model([[1, 1, 1], [1, 0, 0]], 1.0)
    maps = GroupMaps.from_assignments([0, 0, 0, 0], [0, 0, 0, 0])
    return model, maps, ObjectParams(m=[1.0], mu=[mu])


@pytest.fixture
def two_rod() -> Triple:
    return make_two_rod()


@pytest.fixture
def l_object() -> Triple:
    return make_l_object()


@pytest.fixture
def l1() -> Triple:
    return builtin_object("L1")


@pytest.fixture
def hammer() -> Triple:
    return builtin_object("hammer")


@pytest.fixture
def sim_config() -> SimConfig:
    return SimConfig()


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(1234)
