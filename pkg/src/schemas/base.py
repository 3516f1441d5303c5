"""
Base schema shared by every serialized document.
"""
from pydantic import BaseModel, ConfigDict


class BaseSchema(BaseModel):
    """
    Base for JSON documents (object descriptors, action files, reports).

    Unknown keys are rejected so a misspelled field in a hand-written file fails
    validation instead of silently falling back to its default.
    """

    model_config = ConfigDict(
        from_attributes=True,
        populate_by_name=True,
        extra="forbid",
    )
