"""Four-dimensional power-commutative real division algebras."""

from .core import AlgebraTable, CheckReport, ConvergenceError, SubspaceBasis, ValidationError
from .quadratic import KTuple, build_pc_algebra, build_quadratic_algebra
from .classification import aut_classification, are_isomorphic, canonicalize, stratum

__all__ = [
    "AlgebraTable", "CheckReport", "ConvergenceError", "SubspaceBasis", "ValidationError",
    "KTuple", "build_pc_algebra", "build_quadratic_algebra",
    "aut_classification", "are_isomorphic", "canonicalize", "stratum",
]
__version__ = "0.1.0"
