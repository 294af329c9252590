"""
Strong Szegő asymptotics for structured Toeplitz determinants.

Every prediction has the shape G^n E times a constant. This module holds
the border parameters of psi = q1 phi + q2 and the constants attached to
pure, bordered, two-bordered, semi-framed and z*phi-bordered determinants.
"""

import logging
import math
import warnings
from dataclasses import dataclass, field
from typing import Any, Dict, Mapping, Optional, Sequence, Tuple

import numpy as np

from toeplitz_framework.core.exceptions import (
    ConditionalFormulaWarning,
    ParameterError,
    PoleOnCircleError,
    PreconditionViolationError,
    UnsupportedSpecError,
)
from toeplitz_framework.core.logcomplex import LogComplex
from toeplitz_framework.rhp import analyticity_annulus, c_n
from toeplitz_framework.symbols import (
    CIRCLE_EPS,
    LogSymbolData,
    Symbol,
    SymbolKind,
    alpha_taylor_at_zero,
    as_complex,
    constant_symbol,
    eval_alpha,
    rational_symbol,
    szego_data,
)

logger = logging.getLogger(__name__)

C_FLOOR = 1e-14


def _complex_list(values: Sequence[Any], name: str, length: int) -> Tuple[complex, ...]:
    values = tuple(as_complex(v) for v in values)
    if len(values) not in (0, length):
        raise ParameterError(f"{name} has {len(values)} entries for {length} poles")
    return values if values else (0j,) * length


@dataclass(frozen=True)
class BorderSpec:
    """
    Parameters of psi = q1 phi + q2 with

        q1 = a0 + a1 z + b0 / z + sum_j b_j z / (z - c_j)
        q2 = a0_hat + a1_hat z + b0_hat / z + sum_j b_hat_j / (z - c_j)

    over one shared pole list.
    """

    a0: complex = 0j
    a1: complex = 0j
    b0: complex = 0j
    b: Tuple[complex, ...] = ()
    ahat0: complex = 0j
    ahat1: complex = 0j
    bhat0: complex = 0j
    bhat: Tuple[complex, ...] = ()
    poles: Tuple[complex, ...] = field(default=())

    def __post_init__(self):
        for c in self.poles:
            if c == 0:
                raise ParameterError("border poles must be nonzero", {"pole": c})
            if abs(abs(c) - 1.0) < CIRCLE_EPS:
                raise PoleOnCircleError(f"border pole {c} lies on the unit circle", {"pole": c})
        if len(self.b) != len(self.poles) or len(self.bhat) != len(self.poles):
            raise ParameterError(
                "b and b_hat must have one weight per pole",
                {"poles": len(self.poles), "b": len(self.b), "b_hat": len(self.bhat)},
            )

    @classmethod
    def from_params(cls, params: Mapping[str, Any]) -> "BorderSpec":
        """Build from the config encoding (keys a0, a1, b0, b, a0_hat, a1_hat, b0_hat, b_hat, poles)."""
        known = {"a0", "a1", "b0", "b", "a0_hat", "a1_hat", "b0_hat", "b_hat", "poles"}
        unknown = set(params) - known
        if unknown:
            raise ParameterError(f"unknown border parameters {sorted(unknown)}")
        poles = tuple(as_complex(c) for c in params.get("poles", ()))
        return cls(
            a0=as_complex(params.get("a0", 0.0)),
            a1=as_complex(params.get("a1", 0.0)),
            b0=as_complex(params.get("b0", 0.0)),
            b=_complex_list(params.get("b", ()), "b", len(poles)),
            ahat0=as_complex(params.get("a0_hat", 0.0)),
            ahat1=as_complex(params.get("a1_hat", 0.0)),
            bhat0=as_complex(params.get("b0_hat", 0.0)),
            bhat=_complex_list(params.get("b_hat", ()), "b_hat", len(poles)),
            poles=poles,
        )

    def to_params(self) -> Dict[str, Any]:
        pair = lambda w: [w.real, w.imag]
        return {
            "a0": pair(self.a0),
            "a1": pair(self.a1),
            "b0": pair(self.b0),
            "b": [pair(w) for w in self.b],
            "a0_hat": pair(self.ahat0),
            "a1_hat": pair(self.ahat1),
            "b0_hat": pair(self.bhat0),
            "b_hat": [pair(w) for w in self.bhat],
            "poles": [pair(c) for c in self.poles],
        }

    def scale(self, factor: complex) -> "BorderSpec":
        factor = complex(factor)
        return BorderSpec(
            a0=factor * self.a0,
            a1=factor * self.a1,
            b0=factor * self.b0,
            b=tuple(factor * w for w in self.b),
            ahat0=factor * self.ahat0,
            ahat1=factor * self.ahat1,
            bhat0=factor * self.bhat0,
            bhat=tuple(factor * w for w in self.bhat),
            poles=self.poles,
        )

    @property
    def has_q1(self) -> bool:
        return any(w != 0 for w in (self.a0, self.a1, self.b0, *self.b))

    @property
    def has_q2(self) -> bool:
        return any(w != 0 for w in (self.ahat0, self.ahat1, self.bhat0, *self.bhat))

    def q1_symbol(self) -> Symbol:
        # z / (z - c) = 1 + c / (z - c)
        return rational_symbol(
            self.a0 + sum(self.b, 0j),
            self.a1,
            self.b0,
            [(c, w * c) for c, w in zip(self.poles, self.b) if w != 0],
            name="q1",
        )

    def q2_symbol(self) -> Symbol:
        return rational_symbol(
            self.ahat0,
            self.ahat1,
            self.bhat0,
            [(c, w) for c, w in zip(self.poles, self.bhat) if w != 0],
            name="q2",
        )

    def to_symbol(self, bulk: Symbol) -> Symbol:
        """The border symbol q1 * bulk + q2."""
        if not self.has_q1 and not self.has_q2:
            return constant_symbol(0.0)
        if not self.has_q1:
            combo = self.q2_symbol()
        elif not self.has_q2:
            combo = self.q1_symbol() * bulk
        else:
            combo = self.q1_symbol() * bulk + self.q2_symbol()
        return Symbol(
            evaluator=combo.evaluator,
            kind=SymbolKind.RATIONAL_COMBO,
            name=f"q1*{bulk.name}+q2",
            annulus=combo.annulus,
            coefficient_rule=combo.coefficient_rule,
            params=self.to_params(),
        )


@dataclass(frozen=True)
class AsymptoticPrediction:
    """G^n E times a constant; log_leading carries n log G + log E."""

    log_leading: LogComplex
    constant: complex
    decay_note: str = ""

    @property
    def value(self) -> LogComplex:
        if self.constant == 0:
            return LogComplex.zero()
        return self.log_leading.scale(self.constant)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "log_leading": self.log_leading.to_dict(),
            "constant": [self.constant.real, self.constant.imag],
            "decay_note": self.decay_note,
        }


def decay_note(phi: Symbol, poles: Sequence[complex] = (), data: Optional[LogSymbolData] = None) -> str:
    """Admissible range for rho: analyticity annulus of phi intersected with the pole moduli."""
    inner, outer = analyticity_annulus(phi, data)
    outside = [abs(c) for c in poles if abs(c) > 1.0]
    inside = [abs(c) for c in poles if abs(c) < 1.0]
    bound = min([outer] + outside)
    if inner > 0 or inside:
        bound = min(bound, 1.0 / max([inner] + inside))
    if math.isinf(bound):
        return "O(rho^-n) for every rho > 1"
    return f"O(rho^-n) for 1 < rho < {bound:.6g}"


def prediction(phi: Symbol, n: int, constant: complex, poles: Sequence[complex] = ()) -> AsymptoticPrediction:
    """Wrap a constant as G^n E * constant for size n."""
    data = szego_data(phi)
    leading = LogComplex.from_log(n * data.log_G + data.log_E)
    return AsymptoticPrediction(leading, complex(constant), decay_note(phi, poles, data))


def predict_pure(phi: Symbol, n: int) -> LogComplex:
    """n log G + log E from the strong Szegő limit theorem."""
    if n < 0:
        raise ParameterError(f"size must be non-negative, got {n}")
    data = szego_data(phi)
    return LogComplex.from_log(n * data.log_G + data.log_E)


def _alpha(data: LogSymbolData, c: complex) -> complex:
    return complex(eval_alpha(data, c))


def constant_F(phi: Symbol, border: BorderSpec, data: Optional[LogSymbolData] = None) -> complex:
    """Limit of D^B_n[phi; q1 phi + q2] / (G^n E)."""
    data = data or szego_data(phi)
    alpha0 = alpha_taylor_at_zero(data, 0)
    total = border.a0 + border.b0 * data.log_coeff(1)
    inner = border.ahat0 - border.ahat1 * data.log_coeff(-1)
    for c, b, b_hat in zip(border.poles, border.b, border.bhat):
        if abs(c) < 1.0:
            total += b * _alpha(data, c) / alpha0
        else:
            inner -= b_hat / c * _alpha(data, c)
    return complex(total + inner / alpha0)


def constant_F_general(phi: Symbol, psi: Symbol, data: Optional[LogSymbolData] = None) -> complex:
    """[phi_-^{-1} psi]_0 / [phi_+]_0 for any psi analytic near the circle."""
    data = data or szego_data(phi)
    weighted = Symbol(
        evaluator=lambda z: data.alpha_out(z) * psi.evaluator(z),
        kind=SymbolKind.ANALYTIC,
        name=f"alpha_out*{psi.name}",
        annulus=psi.annulus,
    )
    return weighted.coeff(0) / data.G


def constant_H(
    phi: Symbol,
    border: BorderSpec,
    data: Optional[LogSymbolData] = None,
    normalize_by: str = "alpha0",
) -> complex:
    """
    Limit of D^B_n[phi; z^{-1}(q1 phi + q2)] / (G^n E).

    normalize_by picks alpha(0) (from the Taylor series) or G (from the
    log-symbol mean) as the divisor of the q2 and inner-pole part; the two
    agree up to quadrature error.
    """
    data = data or szego_data(phi)
    if normalize_by == "alpha0":
        divisor = alpha_taylor_at_zero(data, 0)
    elif normalize_by == "G":
        divisor = data.G
    else:
        raise ParameterError(f"normalize_by must be 'alpha0' or 'G', got {normalize_by!r}")
    l1, l2 = data.log_coeff(1), data.log_coeff(2)
    total = border.a1 + border.a0 * l1 + border.b0 * l2 + 0.5 * border.b0 * l1 ** 2
    inner = border.ahat1
    for c, b, b_hat in zip(border.poles, border.b, border.bhat):
        total -= b / c
        if abs(c) > 1.0:
            inner -= b_hat / c ** 2 * _alpha(data, c)
        else:
            inner += b / c * _alpha(data, c)
    return complex(total + inner / divisor)


def constant_J1(phi: Symbol, border1: BorderSpec, border2: BorderSpec) -> complex:
    """Two-bordered constant det [[F2, F1], [H2, H1]]."""
    data = szego_data(phi)
    f1, f2 = constant_F(phi, border1, data), constant_F(phi, border2, data)
    h1, h2 = constant_H(phi, border1, data), constant_H(phi, border2, data)
    return f2 * h1 - f1 * h2


def predict_bordered_zl(phi: Symbol, ell: int) -> complex:
    """Limit of D^B_{n+1}[phi; z^{-ell} phi] / D_n[phi]: the ell-th Taylor coefficient of alpha at 0."""
    return alpha_taylor_at_zero(szego_data(phi), ell)


def predict_zphi_bordered_ratio(phi: Symbol, border: BorderSpec, n: int, r: Optional[float] = None) -> complex:
    """
    Predicted D^B_{n+1}[z phi; psi] / D_n[z phi] = G (F - H C_n / C_{n-1}).

    The formula assumes C_{n-1} != 0. When both C_n and C_{n-1} vanish
    (phi = 1 and its multiples) the ratio term is dropped with a warning.
    """
    if n < 1:
        raise ParameterError(f"the z*phi prediction needs n >= 1, got {n}")
    data = szego_data(phi)
    F = constant_F(phi, border, data)
    H = constant_H(phi, border, data)
    c_now = c_n(phi, n, r=r, data=data)
    c_prev = c_n(phi, n - 1, r=r, data=data)
    if abs(c_prev) <= C_FLOOR:
        if abs(c_now) > C_FLOOR:
            raise PreconditionViolationError(
                f"C_{n - 1} vanishes while C_{n} does not",
                {"n": n, "c_n": c_now, "c_prev": c_prev},
            )
        warnings.warn(
            f"C_{n - 1} = {c_prev:.3g} is below {C_FLOOR:g}; dropping the C_n/C_(n-1) term",
            ConditionalFormulaWarning,
            stacklevel=2,
        )
        return complex(data.G * F)
    return complex(data.G * (F - H * c_now / c_prev))


# Semi-framed constants

FRAME_RATIONAL = "rational"
FRAME_PHI = "phi"
FRAME_PHI_TILDE = "phi_tilde"

SUPPORTED_FRAMES = {
    "H": {(FRAME_RATIONAL, FRAME_RATIONAL), (FRAME_PHI, FRAME_PHI)},
    "L": {(FRAME_RATIONAL, FRAME_RATIONAL), (FRAME_PHI_TILDE, FRAME_PHI_TILDE)},
    "E": {(FRAME_RATIONAL, FRAME_RATIONAL), (FRAME_PHI_TILDE, FRAME_PHI)},
    "G": {(FRAME_RATIONAL, FRAME_RATIONAL), (FRAME_PHI, FRAME_PHI_TILDE)},
}


def classify_frame(phi: Symbol, frame: Symbol) -> Tuple[str, Tuple[Tuple[complex, complex], ...]]:
    """(form, poles) of a frame: a pure simple-pole sum, or such a sum times phi or phi(1/z)."""
    if frame.kind is SymbolKind.RATIONAL:
        params = frame.params
        extra = [as_complex(params.get(key, 0.0)) for key in ("constant", "linear", "inverse")]
        if "constant" not in params or any(w != 0 for w in extra):
            raise UnsupportedSpecError(f"frame {frame.name} has non-pole terms")
        return FRAME_RATIONAL, tuple(frame.poles)
    if frame.kind is SymbolKind.PRODUCT and frame.base is phi:
        return (FRAME_PHI_TILDE if frame.base_reflected else FRAME_PHI), tuple(frame.poles)
    raise UnsupportedSpecError(
        f"frame {frame.name} is neither a simple-pole sum nor such a sum times the bulk symbol",
        {"kind": frame.kind.value},
    )


def _zeroth_reflected_weight(phi: Symbol, c: complex, d: complex) -> complex:
    """[phi(1/s) s / ((1 - c s)(s - d))]_0."""
    if c == 0:
        rational = rational_symbol(1.0, poles=[(d, d)])
    else:
        p = 1.0 / c
        if abs(p - d) < CIRCLE_EPS:
            raise UnsupportedSpecError(f"frame poles d={d}, c={c} satisfy c d = 1")
        # s / ((1 - c s)(s - d)) = -(1/c) [p/(p-d) / (s-p) + d/(d-p) / (s-d)]
        rational = rational_symbol(poles=[(p, -p / (c * (p - d))), (d, -d / (c * (d - p)))])
    return (rational * phi.reflect()).coeff(0)


def _e_constant_rational(data: LogSymbolData, psi_poles, eta_poles, a: complex) -> complex:
    total = a
    for d, A in psi_poles:
        for c, B in eta_poles:
            if abs(d) > 1.0 and abs(c) > 1.0:
                total += A * B * _alpha(data, c) / _alpha(data, 1.0 / d) / (1.0 - c * d)
    return total


def _e_constant_multiplied(phi: Symbol, data: LogSymbolData, psi_poles, eta_poles, a: complex) -> complex:
    total = a
    for d, A in psi_poles:
        for c, B in eta_poles:
            if abs(d) < 1.0 and abs(c) < 1.0:
                # alpha(1/d) -> 1 as d -> 0
                outer = 1.0 if d == 0 else _alpha(data, 1.0 / d)
                total += A * B * _alpha(data, c) / outer / (1.0 - c * d)
            # every pair; for phi = 1 with both poles outside this adds A B / (1 - c d)
            total -= A * B * _zeroth_reflected_weight(phi, c, d)
    return total


def predict_semiframed(phi: Symbol, psi: Symbol, eta: Symbol, a: complex, variant: str = "H") -> complex:
    """
    Limit of the semi-framed determinant of the given variant divided by G^n E.

    Frames are simple-pole sums A_j/(z - d_j), B_k/(z - c_k), possibly
    multiplied by phi or phi(1/z) as each variant allows. H and L tend to
    a. E collects pole pairs outside the disk for pure rational frames,
    and for multiplied frames the inside pairs together with a zeroth
    Fourier coefficient that only vanishes for phi = 1 when some pole
    lies outside. G is E of the reflected bulk symbol.
    """
    variant = variant.upper()
    if variant not in SUPPORTED_FRAMES:
        raise ParameterError(f"unknown semi-framed variant {variant!r}")
    a = complex(a)
    psi_form, psi_poles = classify_frame(phi, psi)
    eta_form, eta_poles = classify_frame(phi, eta)
    if (psi_form, eta_form) not in SUPPORTED_FRAMES[variant]:
        raise UnsupportedSpecError(
            f"variant {variant} with frames ({psi_form}, {eta_form}) has no closed form",
            {"variant": variant, "psi": psi_form, "eta": eta_form},
        )
    if variant in ("H", "L"):
        return a
    bulk = phi if variant == "E" else phi.reflect()
    data = szego_data(bulk)
    logger.debug("semi-framed %s constant over %d x %d poles", variant, len(psi_poles), len(eta_poles))
    if psi_form == FRAME_RATIONAL:
        return complex(_e_constant_rational(data, psi_poles, eta_poles, a))
    return complex(_e_constant_multiplied(bulk, data, psi_poles, eta_poles, a))
