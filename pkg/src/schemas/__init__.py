"""
Serialized document schemas.
"""
from src.schemas.base import BaseSchema
from src.schemas.objects import ObjectDescriptor, CatalogFile

__all__ = [
    "BaseSchema",
    "ObjectDescriptor",
    "CatalogFile",
]
