"""
Exceptions for the Toeplitz framework.

This module defines the custom exception classes raised by the symbol,
matrix, polynomial and Riemann-Hilbert layers. Every error carries enough
context for the harness to turn it into a structured report line.
"""

from typing import Any, Dict, Optional


class ToeplitzError(Exception):
    """Base exception class for all Toeplitz framework errors."""

    def __init__(self, message: str, context: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.context = dict(context or {})

    def to_dict(self) -> Dict[str, Any]:
        """Convert the error to a dictionary for reports."""
        return {
            "error": type(self).__name__,
            "message": str(self),
            "context": {k: repr(v) if isinstance(v, complex) else v for k, v in self.context.items()},
        }


class ParameterError(ToeplitzError):
    """Exception for invalid symbol family parameters."""
    pass


class PoleOnCircleError(ParameterError):
    """Exception for a declared pole lying on the unit circle."""
    pass


class AccuracyError(ToeplitzError):
    """Exception for quadratures or series that fail to converge."""

    def __init__(self, message: str, tail_estimate: float = float("nan"), context: Optional[Dict[str, Any]] = None):
        super().__init__(message, context)
        self.tail_estimate = tail_estimate


class SingularSymbolError(ToeplitzError):
    """Exception for symbols vanishing (or nearly so) on the unit circle."""
    pass


class WindingError(ToeplitzError):
    """Exception for symbols with a nonzero winding number where zero is required."""

    def __init__(self, message: str, winding: int, context: Optional[Dict[str, Any]] = None):
        super().__init__(message, context)
        self.winding = winding


class BoundaryError(ToeplitzError):
    """Exception for evaluations requested on the unit circle itself."""
    pass


class ContourProximityError(BoundaryError):
    """Exception for evaluation points too close to a quadrature contour."""
    pass


class RangeError(ToeplitzError):
    """Exception for truncation orders or indices outside the available range."""
    pass


class SpecError(ToeplitzError):
    """Exception for malformed structured determinant specifications."""
    pass


class MatrixIndexError(SpecError):
    """Exception for invalid row/column index lists in minors."""
    pass


class ShapeError(SpecError):
    """Exception for non-square matrices handed to determinant routines."""
    pass


class UnsupportedSpecError(SpecError):
    """Exception for frame symbols outside the forms a prediction supports."""
    pass


class DegenerateMomentError(ToeplitzError):
    """Exception for a vanishing Toeplitz determinant D_k during construction."""

    def __init__(self, k: int, context: Optional[Dict[str, Any]] = None):
        super().__init__(f"Toeplitz determinant D_{k} vanishes", context)
        self.k = k


class PreconditionViolationError(ToeplitzError):
    """Exception for a quantity whose existence hypothesis fails (e.g. X11(0;n) = 0)."""
    pass


class ConfigurationError(ToeplitzError):
    """Exception for invalid sweep or identity-suite configuration."""
    pass


class ConditionalFormulaWarning(UserWarning):
    """Warning for a prediction whose non-vanishing hypothesis is numerically in doubt."""
    pass
