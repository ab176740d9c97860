"""Least-area polyhedral tiles of space: geometry, bounds and candidate solids."""

from polytiles.candidates import build, build_competitor, build_sommerville
from polytiles.mesh import Polyhedron, measures, scale_to_unit_volume, validate

__all__ = [
    "Polyhedron",
    "build",
    "build_competitor",
    "build_sommerville",
    "measures",
    "scale_to_unit_volume",
    "validate",
]
