"""
Built-in object catalog and object descriptor file I/O.
"""
import json
import logging
from functools import lru_cache
from pathlib import Path
from typing import Dict, List, Tuple, Union

import numpy as np
from pydantic import ValidationError

from src.errors import CatalogError, InconsistentGroupingError, ReportIOError
from src.models.groups import NO_GROUP, GroupMaps, ObjectParams
from src.models.particles import ParticleModel, build_grid_model
from src.schemas.objects import CatalogFile, ObjectDescriptor


logger = logging.getLogger(__name__)

# Data directory
DATA_DIR = Path(__file__).parent / "data"
CATALOG_FILE = DATA_DIR / "catalog.json"

ObjectTriple = Tuple[ParticleModel, GroupMaps, ObjectParams]


@lru_cache()
def _load_catalog() -> Dict[str, ObjectDescriptor]:
    with open(CATALOG_FILE, "r", encoding="utf-8") as f:
        catalog = CatalogFile.model_validate(json.load(f))
    return {d.name: d for d in catalog.objects}


def catalog_names() -> List[str]:
    """Names of the built-in objects, in catalog order."""
    return list(_load_catalog().keys())


def catalog_descriptor(name: str) -> ObjectDescriptor:
    catalog = _load_catalog()
    if name not in catalog:
        raise CatalogError(f"Unknown catalog object: {name} (known: {', '.join(catalog)})")
    return catalog[name]


def builtin_object(name: str) -> ObjectTriple:
    """
    Get a built-in object.

    Args:
        name: catalog key ("I1", "I2", "L1", "L2", "F1", "F2", "hammer", "wrench")

    Returns:
        (model, maps, params) with the catalog's ground-truth parameters
    """
    return object_from_descriptor(catalog_descriptor(name))


def object_from_descriptor(descriptor: ObjectDescriptor) -> ObjectTriple:
    occupancy = np.asarray(descriptor.occupancy, dtype=bool)
    model = build_grid_model(
        occupancy,
        descriptor.spacing,
        contact=np.asarray(descriptor.contact, dtype=bool) & occupancy,
        graspable=np.asarray(descriptor.graspable, dtype=bool) & occupancy,
    )

    mass = np.asarray(descriptor.mass_groups, dtype=int)[occupancy]
    friction = np.asarray(descriptor.friction_groups, dtype=int)[occupancy]
    friction = np.where(model.contact_mask, friction, NO_GROUP)
    if np.any(model.contact_mask & (friction < 0)):
        raise InconsistentGroupingError("every contact cell needs a friction group")
    contact = None
    if descriptor.contact_groups is not None:
        contact = np.asarray(descriptor.contact_groups, dtype=int)[occupancy]
    maps = GroupMaps.from_assignments(mass, friction, contact)
    maps.validate_for(model)

    params = ObjectParams(m=descriptor.masses, mu=descriptor.mus)
    params.validate_for(maps)
    return model, maps, params


def descriptor_from_object(
    model: ParticleModel,
    maps: GroupMaps,
    params: ObjectParams,
    name: str = "",
    truth_known: bool = True,
) -> ObjectDescriptor:
    """Rebuild a descriptor on the tightest grid holding the model's cells."""
    cells = model.cells - model.cells.min(axis=0)
    rows, cols = cells.max(axis=0) + 1

    def grid(values, fill: int = 0) -> List[List[int]]:
        out = np.full((rows, cols), fill, dtype=int)
        out[cells[:, 0], cells[:, 1]] = values
        return out.tolist()

    derived = GroupMaps.from_assignments(maps.mass_assignment, maps.friction_assignment)
    contact_groups = None
    if not np.array_equal(derived.contact_assignment, maps.contact_assignment):
        contact_groups = grid(maps.contact_assignment, NO_GROUP)

    return ObjectDescriptor(
        name=name,
        spacing=model.spacing,
        occupancy=grid(1),
        contact=grid(model.contact_mask.astype(int)),
        graspable=grid(model.graspable_mask.astype(int)),
        mass_groups=grid(maps.mass_assignment, NO_GROUP),
        friction_groups=grid(maps.friction_assignment, NO_GROUP),
        contact_groups=contact_groups,
        masses=[float(x) for x in params.m],
        mus=[float(x) for x in params.mu],
        truth_known=truth_known,
    )


def load_descriptor(path: Union[str, Path]) -> ObjectDescriptor:
    try:
        with open(path, "r", encoding="utf-8") as f:
            return ObjectDescriptor.model_validate(json.load(f))
    except OSError as e:
        raise ReportIOError(f"Cannot read object descriptor {path}: {e}") from e
    except (json.JSONDecodeError, ValidationError) as e:
        raise CatalogError(f"Invalid object descriptor {path}: {e}") from e


def save_descriptor(descriptor: ObjectDescriptor, path: Union[str, Path]) -> None:
    try:
        Path(path).write_text(descriptor.model_dump_json(indent=2), encoding="utf-8")
    except OSError as e:
        raise ReportIOError(f"Cannot write object descriptor {path}: {e}") from e


def resolve_object(name_or_path: str) -> Tuple[str, ObjectDescriptor]:
    """Resolve a catalog key or a descriptor file path."""
    if name_or_path in _load_catalog():
        return name_or_path, catalog_descriptor(name_or_path)
    path = Path(name_or_path)
    if path.suffix == ".json" or path.exists():
        descriptor = load_descriptor(path)
        return descriptor.name or path.stem, descriptor
    raise CatalogError(f"Unknown catalog object: {name_or_path}")
