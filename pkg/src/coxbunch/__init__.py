"""Exact computations for bunched rings and the varieties they define."""

from .bunched import (
    FBunch,
    Relation,
    RingPresentation,
    ValidationError,
    covering_collection,
    relevant_faces,
    validate_fbunch,
    validate_presentation,
)
from .cones import RatCone

__all__ = [
    "FBunch",
    "RatCone",
    "Relation",
    "RingPresentation",
    "ValidationError",
    "covering_collection",
    "relevant_faces",
    "validate_fbunch",
    "validate_presentation",
]

__version__ = "0.1.0"
