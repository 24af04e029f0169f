"""Numerical toolkit for torsional rigidity of convex polytopes and the
sharp upper bound on T P^2 / |volume|^3."""

__version__ = "0.1.0"

from .errors import MakaiError
from .families import FamilySpec, analytic_geometry, make_body, makai_constant
from .geometry import ConvexBody, build_body, erode, summarize

__all__ = [
    "ConvexBody", "FamilySpec", "MakaiError", "analytic_geometry", "build_body",
    "erode", "make_body", "makai_constant", "summarize", "__version__",
]
