"""
Toeplitz Framework

Numerical evaluation of multi-bordered, semi-framed, framed and
multi-framed Toeplitz determinants: exact construction, condensation
reductions, bi-orthogonal polynomials on the unit circle, Riemann-Hilbert
representations and Szegő-type asymptotics, together with a harness that
checks all of them against each other.
"""

__version__ = "0.1.0"

# Make core components available at the package level
from toeplitz_framework.core.exceptions import (
    ToeplitzError, ParameterError, PoleOnCircleError, AccuracyError,
    SingularSymbolError, WindingError, SpecError, UnsupportedSpecError,
    PreconditionViolationError, ConfigurationError, ConditionalFormulaWarning,
)
from toeplitz_framework.core.logcomplex import LogComplex

from toeplitz_framework.symbols import (
    Symbol, SymbolKind, make_family, szego_data, winding_number,
)
from toeplitz_framework.structmat import (
    DetKind, StructuredDetSpec, build_matrix, det_log, structured_det,
    toeplitz_det, bordered_det, semiframed_det, framed_spec,
)
from toeplitz_framework.bopuc import BopucSystem, compute_bopuc
from toeplitz_framework.szego import BorderSpec

__all__ = [
    "__version__",
    "ToeplitzError",
    "ParameterError",
    "PoleOnCircleError",
    "AccuracyError",
    "SingularSymbolError",
    "WindingError",
    "SpecError",
    "UnsupportedSpecError",
    "PreconditionViolationError",
    "ConfigurationError",
    "ConditionalFormulaWarning",
    "LogComplex",
    "Symbol",
    "SymbolKind",
    "make_family",
    "szego_data",
    "winding_number",
    "DetKind",
    "StructuredDetSpec",
    "build_matrix",
    "det_log",
    "structured_det",
    "toeplitz_det",
    "bordered_det",
    "semiframed_det",
    "framed_spec",
    "BopucSystem",
    "compute_bopuc",
    "BorderSpec",
]
