"""
Overflow-safe representation of complex numbers.

Toeplitz determinants grow or decay like G^n, so every determinant in the
framework is carried as a log-modulus together with a phase.
"""

import cmath
import math
from dataclasses import dataclass
from typing import Any, Dict, Iterable, Tuple


def _reduce_phase(phase: float) -> float:
    """Map a phase into (-pi, pi]."""
    reduced = math.remainder(phase, 2.0 * math.pi)
    if reduced <= -math.pi:
        reduced += 2.0 * math.pi
    return reduced


@dataclass(frozen=True)
class LogComplex:
    """A complex number stored as (log|w|, arg w), with an explicit zero flag."""

    log_modulus: float
    phase: float = 0.0
    is_zero: bool = False

    def __post_init__(self):
        if self.is_zero:
            object.__setattr__(self, "log_modulus", -math.inf)
            object.__setattr__(self, "phase", 0.0)
        else:
            object.__setattr__(self, "phase", _reduce_phase(float(self.phase)))

    @classmethod
    def zero(cls) -> "LogComplex":
        return cls(-math.inf, 0.0, True)

    @classmethod
    def one(cls) -> "LogComplex":
        return cls(0.0, 0.0)

    @classmethod
    def from_complex(cls, value: complex) -> "LogComplex":
        value = complex(value)
        if value == 0:
            return cls.zero()
        return cls(math.log(abs(value)), cmath.phase(value))

    @classmethod
    def from_log(cls, log_value: complex) -> "LogComplex":
        """Build exp(log_value) without leaving log scale."""
        log_value = complex(log_value)
        return cls(log_value.real, log_value.imag)

    def __mul__(self, other: "LogComplex") -> "LogComplex":
        if self.is_zero or other.is_zero:
            return LogComplex.zero()
        return LogComplex(self.log_modulus + other.log_modulus, self.phase + other.phase)

    def __truediv__(self, other: "LogComplex") -> "LogComplex":
        if other.is_zero:
            raise ZeroDivisionError("division by a zero LogComplex")
        if self.is_zero:
            return LogComplex.zero()
        return LogComplex(self.log_modulus - other.log_modulus, self.phase - other.phase)

    def __neg__(self) -> "LogComplex":
        if self.is_zero:
            return self
        return LogComplex(self.log_modulus, self.phase + math.pi)

    def __pow__(self, exponent: int) -> "LogComplex":
        if self.is_zero:
            return LogComplex.one() if exponent == 0 else LogComplex.zero()
        return LogComplex(exponent * self.log_modulus, exponent * self.phase)

    def scale(self, factor: complex) -> "LogComplex":
        """Multiply by an ordinary complex number."""
        return self * LogComplex.from_complex(factor)

    def to_complex(self, shift: float = 0.0) -> complex:
        """Return exp(log_modulus - shift) * exp(i phase)."""
        if self.is_zero:
            return 0j
        return cmath.rect(math.exp(self.log_modulus - shift), self.phase)

    def log(self) -> complex:
        """Principal logarithm; raises for zero."""
        if self.is_zero:
            raise ValueError("logarithm of zero")
        return complex(self.log_modulus, self.phase)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "log_modulus": None if self.is_zero else self.log_modulus,
            "phase": self.phase,
            "is_zero": self.is_zero,
        }


def max_log_modulus(values: Iterable[LogComplex]) -> float:
    """Largest log-modulus among the nonzero values; 0.0 if all are zero."""
    finite = [v.log_modulus for v in values if not v.is_zero]
    return max(finite) if finite else 0.0


def relative_difference(a: LogComplex, b: LogComplex) -> float:
    """|a - b| / max(|a|, |b|) evaluated at a common scale."""
    if a.is_zero and b.is_zero:
        return 0.0
    shift = max_log_modulus([a, b])
    x, y = a.to_complex(shift), b.to_complex(shift)
    return abs(x - y) / max(abs(x), abs(y))


def log_combination(terms: Iterable[Tuple[complex, LogComplex]]) -> LogComplex:
    """sum_i w_i * v_i for ordinary weights w_i, evaluated at a common scale."""
    terms = list(terms)
    shift = max_log_modulus([v for _, v in terms])
    total = sum((complex(w) * v.to_complex(shift) for w, v in terms), 0j)
    if total == 0:
        return LogComplex.zero()
    return LogComplex(math.log(abs(total)) + shift, cmath.phase(total))


def identity_residual(lhs: Iterable[Tuple[complex, LogComplex]], rhs: Iterable[Tuple[complex, LogComplex]]) -> float:
    """
    |sum lhs - sum rhs| relative to the largest single term.

    All terms are rescaled by the largest log-modulus first; zero when every
    term vanishes.
    """
    lhs, rhs = list(lhs), list(rhs)
    values = [v for _, v in lhs + rhs]
    shift = max_log_modulus(values)
    scaled = [(complex(w) * v.to_complex(shift)) for w, v in lhs + rhs]
    scale = max((abs(x) for x in scaled), default=0.0)
    if scale == 0.0:
        return 0.0
    difference = sum(scaled[: len(lhs)], 0j) - sum(scaled[len(lhs):], 0j)
    return abs(difference) / scale
