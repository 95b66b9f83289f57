"""Exact lattice-point slicing of rational polytopes."""

from .constants import FlatnessTable
from .lattice import Lattice
from .polytope import Flat, RationalPolytope, from_inequalities, from_points

__version__ = "0.1.0"

__all__ = ["Flat", "FlatnessTable", "Lattice", "RationalPolytope", "from_inequalities", "from_points"]
