"""Generation, counting, Pell reduction, search and statistics for near prime-order MNT curve families."""

from .families import Family, companion, generate, verify_family
from .intpoly import LinPoly, QuadPoly
from .pell import PellInstance, PellSolutionClass, reduce
from .search import CurveInstance

__all__ = [
    "CurveInstance",
    "Family",
    "LinPoly",
    "PellInstance",
    "PellSolutionClass",
    "QuadPoly",
    "companion",
    "generate",
    "reduce",
    "verify_family",
]

__version__ = "0.1.0"
