"""Virasoro N-point functions on hyperelliptic Riemann surfaces, in exact arithmetic."""

from .curve import CurveSpec, generic_curve, read_curve, sample_curve, validate_curve
from .exact_algebra import LinearSystem, Poly, solve_linear
from .field_element import GaloisElement

__all__ = [
    "CurveSpec",
    "GaloisElement",
    "LinearSystem",
    "Poly",
    "generic_curve",
    "read_curve",
    "sample_curve",
    "solve_linear",
    "validate_curve",
]
__version__ = "0.1.0"
