"""Projective geometry over real involutive algebras.

Algebras (R, C, D, Cs, H, Hs, C x C and the family K_t), Hermitian forms on
free modules, projective points with their tangent spaces and metrics, the
spread-field connection with its curvature, and the identification of
projective lines with spaces of oriented geodesics.
"""

from .algebra import CS, CXC, HS, C, D, H, R, Algebra, Scalar, algebra, kt
from .errors import GeometryError
from .hermitian import HermitianSpace, ModuleVector, form
from .projective import MetricConvention, ProjPoint, Tangent, tance

__version__ = "0.1.0"

__all__ = [
    "Algebra",
    "C",
    "CS",
    "CXC",
    "D",
    "GeometryError",
    "H",
    "HS",
    "HermitianSpace",
    "MetricConvention",
    "ModuleVector",
    "ProjPoint",
    "R",
    "Scalar",
    "Tangent",
    "algebra",
    "form",
    "kt",
    "tance",
]
