"""
Core types of the Toeplitz framework: exceptions and the log-scale complex type.
"""

from toeplitz_framework.core.exceptions import (
    ToeplitzError,
    ParameterError,
    PoleOnCircleError,
    AccuracyError,
    SingularSymbolError,
    WindingError,
    BoundaryError,
    ContourProximityError,
    RangeError,
    SpecError,
    MatrixIndexError,
    ShapeError,
    UnsupportedSpecError,
    DegenerateMomentError,
    PreconditionViolationError,
    ConfigurationError,
    ConditionalFormulaWarning,
)
from toeplitz_framework.core.logcomplex import (
    LogComplex,
    identity_residual,
    log_combination,
    max_log_modulus,
    relative_difference,
)

__all__ = [
    "ToeplitzError",
    "ParameterError",
    "PoleOnCircleError",
    "AccuracyError",
    "SingularSymbolError",
    "WindingError",
    "BoundaryError",
    "ContourProximityError",
    "RangeError",
    "SpecError",
    "MatrixIndexError",
    "ShapeError",
    "UnsupportedSpecError",
    "DegenerateMomentError",
    "PreconditionViolationError",
    "ConfigurationError",
    "ConditionalFormulaWarning",
    "LogComplex",
    "max_log_modulus",
    "relative_difference",
    "log_combination",
    "identity_residual",
]
