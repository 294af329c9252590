"""
Riemann-Hilbert data built from the bi-orthogonal polynomials.

X(z; n) solves the problem with jump [[1, z^{-n} phi], [0, 1]] on the
unit circle and X(z) z^{-n sigma3} = I + X1/z + X2/z^2 + ... at infinity:

    X11 = q_n(z)                      X12 = C[q_n(s) s^{-n} phi(s)](z)
    X21 = -k_{n-1}^2 z^{n-1} q_hat_{n-1}(1/z)
    X22 = -k_{n-1}^2 C[q_hat_{n-1}(1/s) s^{-1} phi(s)](z)

with C the Cauchy transform over the circle. Z(z; n) is the same object
for the weight z*phi; it is available directly or rebuilt from X(z; n)
and from X(z; n-1). Cauchy transforms are summed from the symbol's
Fourier coefficients, so Taylor data at 0 and the moments at infinity are
exact coefficient sums.
"""

import logging
import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, Optional, Tuple

import numpy as np

from toeplitz_framework.bopuc import (
    BopucSystem,
    VARIANTS,
    adaptive_tensor_quadrature,
    compute_bopuc,
    direct_semiframed_ratio,
    frame_weights,
    QUADRATURE_CAP,
    QUADRATURE_START,
    QUADRATURE_TOL,
    SemiframedValue,
)
from toeplitz_framework.core.exceptions import (
    AccuracyError,
    BoundaryError,
    ContourProximityError,
    ParameterError,
    PoleOnCircleError,
    PreconditionViolationError,
    RangeError,
)
from toeplitz_framework.core.logcomplex import LogComplex
from toeplitz_framework.symbols import (
    CIRCLE_EPS,
    FourierSeries,
    LogSymbolData,
    Symbol,
    circle_nodes,
    szego_data,
)

if TYPE_CHECKING:
    from toeplitz_framework.szego import BorderSpec

logger = logging.getLogger(__name__)

CAUCHY_TRUNC = 256
PRECONDITION_EPS = 1e-15
CONTOUR_PROXIMITY = 1e-6
DECAY_FLOOR = 1e-13
REGIONS = ("omega0", "omega1", "omega2", "omega_inf")


def _series(phi: Symbol, weights: np.ndarray, exponents: np.ndarray, trunc: int) -> FourierSeries:
    """Coefficients j in [-trunc, trunc] of sum_a weights[a] s^{exponents[a]} phi(s)."""
    j = np.arange(-trunc, trunc + 1)
    table = phi.coefficients_at(j[:, None] - exponents[None, :])
    return FourierSeries(-trunc, table @ weights)


def x11_coefficients(system: BopucSystem, n: int) -> np.ndarray:
    return system.monic_q[n, : n + 1].copy()


def x21_coefficients(system: BopucSystem, n: int) -> np.ndarray:
    """Ascending coefficients of -k_{n-1}^2 z^{n-1} q_hat_{n-1}(1/z); zero for n = 0."""
    if n == 0:
        return np.zeros(1, dtype=complex)
    return -system.kappa_sq[n - 1] * system.monic_qhat[n - 1, n - 1:: -1]


@dataclass(frozen=True, eq=False)
class XData:
    """
    Exact data of X(z; n).

    ``inf1``/``inf2`` are the first two coefficient matrices of
    X(z) z^{-n sigma3} at infinity. ``x22_series`` is None for n = 0,
    where X22 is identically 1.
    """

    symbol: Symbol
    n: int
    x11: np.ndarray
    x21: np.ndarray
    x12_series: FourierSeries
    x22_series: Optional[FourierSeries]
    inf1: np.ndarray
    inf2: np.ndarray

    @property
    def x11_at_zero(self) -> complex:
        return complex(self.x11[0])

    @property
    def x21_at_zero(self) -> complex:
        return complex(self.x21[0])

    def x12_taylor(self, ell: int) -> complex:
        """ell-th Taylor coefficient of X12 at 0."""
        if ell < 0:
            return 0j
        return self.x12_series[ell]

    def x22_taylor(self, ell: int) -> complex:
        if ell < 0:
            return 0j
        if self.x22_series is None:
            return 1.0 + 0j if ell == 0 else 0j
        return self.x22_series[ell]

    def entries(self, z) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        z = np.asarray(z, dtype=complex)
        if np.any(np.abs(np.abs(z) - 1.0) < CIRCLE_EPS):
            raise BoundaryError("X(z) is evaluated off the unit circle only", {"n": self.n})
        poly = np.polynomial.polynomial.polyval
        x11 = poly(z, self.x11)
        x21 = poly(z, self.x21)
        x12 = np.asarray(self.x12_series.cauchy(z))
        if self.x22_series is None:
            x22 = np.ones(z.shape, dtype=complex)
        else:
            x22 = np.asarray(self.x22_series.cauchy(z))
        return x11, x12, x21, x22

    def __call__(self, z) -> np.ndarray:
        x11, x12, x21, x22 = self.entries(z)
        return _assemble(x11, x12, x21, x22)

    def det_residual(self, z) -> float:
        """max |det X(z) - 1| over the sample points."""
        x11, x12, x21, x22 = self.entries(z)
        return float(np.max(np.abs(x11 * x22 - x12 * x21 - 1.0)))

    def jump_residual(self, thetas, eps: float = 1e-9) -> float:
        """
        Defect of X_+ = X_- [[1, z^{-n} phi], [0, 1]] at circle points exp(i theta).

        Boundary values are approximated from radii 1 -+ eps; the defect is
        relative to the largest entry.
        """
        w = np.exp(1j * np.asarray(thetas, dtype=float))
        plus = self((1.0 - eps) * w)
        minus = self((1.0 + eps) * w)
        jump = np.zeros(w.shape + (2, 2), dtype=complex)
        jump[..., 0, 0] = 1.0
        jump[..., 1, 1] = 1.0
        jump[..., 0, 1] = w ** (-self.n) * self.symbol(w)
        defect = plus - minus @ jump
        scale = max(1.0, float(np.max(np.abs(plus))))
        return float(np.max(np.abs(defect))) / scale


def _assemble(a11, a12, a21, a22) -> np.ndarray:
    a11 = np.asarray(a11, dtype=complex)
    out = np.empty(a11.shape + (2, 2), dtype=complex)
    out[..., 0, 0] = a11
    out[..., 0, 1] = a12
    out[..., 1, 0] = a21
    out[..., 1, 1] = a22
    return out


def x_data(phi: Symbol, n: int, system: Optional[BopucSystem] = None, trunc: int = CAUCHY_TRUNC) -> XData:
    """XData at index n; needs D_{n-1}, D_n, D_{n+1} nonzero."""
    if n < 0:
        raise RangeError("X(z; n) needs n >= 0", {"n": n})
    if system is None or system.max_degree < n or system.symbol is not phi:
        system = compute_bopuc(phi, n)
    trunc = max(trunc, n + 3)
    x11 = x11_coefficients(system, n)
    x21 = x21_coefficients(system, n)
    x12 = _series(phi, x11, np.arange(n + 1) - n, trunc)

    inf1 = np.zeros((2, 2), dtype=complex)
    inf2 = np.zeros((2, 2), dtype=complex)
    inf1[0, 1] = -x12[-n - 1]
    inf2[0, 1] = -x12[-n - 2]
    if n == 0:
        return XData(phi, n, x11, x21, x12, None, inf1, inf2)

    qhat_prev = system.monic_qhat[n - 1, :n]
    x22 = _series(phi, -system.kappa_sq[n - 1] * qhat_prev, -np.arange(n) - 1, trunc)
    inf1[0, 0] = x11[n - 1]
    inf2[0, 0] = x11[n - 2] if n >= 2 else 0.0
    inf1[1, 0] = x21[n - 1]
    inf2[1, 0] = x21[n - 2] if n >= 2 else 0.0
    inf1[1, 1] = -x22[-n - 1]
    inf2[1, 1] = -x22[-n - 2]
    return XData(phi, n, x11, x21, x12, x22, inf1, inf2)


def x_solution(phi: Symbol, n: int, z, system: Optional[BopucSystem] = None) -> np.ndarray:
    return x_data(phi, n, system)(z)


def _vanishes(value: complex, scale: float) -> bool:
    return value == 0 or abs(value) <= PRECONDITION_EPS * max(1.0, scale)


def _require_nonzero(value: complex, scale: float, message: str, context) -> complex:
    if _vanishes(value, scale):
        raise PreconditionViolationError(message, context)
    return value


@dataclass(frozen=True, eq=False)
class ZData:
    """
    Z(z; n) for the weight z*phi, built along one route.

    ``direct`` holds X data of z*phi itself; ``from-x`` rebuilds Z from
    X(z; n) and ``from-x-shift`` from X(z; n-1).
    """

    n: int
    route: str
    source: XData
    b_constant: complex = 0j
    shift_constant: complex = 0j
    moment: complex = 0j

    def __call__(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        if self.route == "direct":
            return self.source(z)
        if np.any(z == 0):
            raise ParameterError("Z is rebuilt from X at z != 0 only", {"route": self.route})
        x = self.source(z)
        if self.route == "from-x":
            r = self.source.x21_at_zero / self.source.x11_at_zero
            left = _assemble(1.0 + self.b_constant / z, -self.moment / z, -r / z, 1.0 / z)
            right = _assemble(np.ones(z.shape), np.zeros(z.shape), np.zeros(z.shape), z)
            return left @ x @ right
        t = self.moment
        left = _assemble(z + self.shift_constant, -t * np.ones(z.shape), np.full(z.shape, 1.0 / t), np.zeros(z.shape))
        return left @ x

    def z11_coefficients(self) -> np.ndarray:
        """Ascending coefficients of the monic polynomial Z11(z; n)."""
        src = self.source
        if self.route == "direct":
            return src.x11.copy()
        out = np.zeros(self.n + 1, dtype=complex)
        if self.route == "from-x":
            # (1 + B/z) X11 - (X1_12/z) X21; the z^{-1} term cancels
            out[: len(src.x11)] += src.x11
            out[: len(src.x11) - 1] += self.b_constant * src.x11[1:]
            out[: len(src.x21) - 1] -= self.moment * src.x21[1:]
            return out
        # (z + beta) X11(n-1) - t X21(n-1)
        out[1: len(src.x11) + 1] += src.x11
        out[: len(src.x11)] += self.shift_constant * src.x11
        out[: len(src.x21)] -= self.moment * src.x21
        return out

    def z11(self, z):
        return np.polynomial.polynomial.polyval(np.asarray(z, dtype=complex), self.z11_coefficients())

    def leading_11(self) -> complex:
        """lim (Z11(z) - z^n) / z^{n-1}, the z^{n-1} coefficient."""
        if self.n < 1:
            raise RangeError("the subleading coefficient needs n >= 1", {"n": self.n})
        return complex(self.z11_coefficients()[self.n - 1])

    def z12_taylor(self, ell: int) -> complex:
        """ell-th Taylor coefficient of Z12 at 0, from exact coefficient sums."""
        src = self.source
        if self.route == "direct":
            return src.x12_taylor(ell)
        if self.route == "from-x":
            # (B + z) X12 - X1_12 X22
            return self.b_constant * src.x12_taylor(ell) + src.x12_taylor(ell - 1) - self.moment * src.x22_taylor(ell)
        # (z + beta) X12(n-1) - t X22(n-1)
        return src.x12_taylor(ell - 1) + self.shift_constant * src.x12_taylor(ell) - self.moment * src.x22_taylor(ell)

    def z12(self, z):
        return self(z)[..., 0, 1]


def z_data(phi: Symbol, n: int, route: str = "from-x", system: Optional[BopucSystem] = None) -> ZData:
    if route == "direct":
        return ZData(n, route, x_data(phi.shift(1), n))
    if route == "from-x":
        x = x_data(phi, n, system)
        x11_0 = _require_nonzero(
            x.x11_at_zero,
            float(np.max(np.abs(x.x11))),
            f"X11(0; {n}) vanishes, so D_{n}[z phi] = 0 and Z(z; {n}) does not exist",
            {"n": n, "symbol": phi.name},
        )
        moment = complex(x.inf1[0, 1])
        return ZData(n, route, x, b_constant=moment * x.x21_at_zero / x11_0, moment=moment)
    if route == "from-x-shift":
        if n < 1:
            raise RangeError("the shifted construction needs n >= 1", {"n": n})
        x = x_data(phi, n - 1, system)
        t = _require_nonzero(
            complex(x.inf1[0, 1]),
            1.0,
            f"X1_12({n - 1}) vanishes, so D_{n}[z phi] = 0 and Z(z; {n}) does not exist",
            {"n": n, "symbol": phi.name},
        )
        beta = complex(x.inf1[1, 1]) - complex(x.inf2[0, 1]) / t
        return ZData(n, route, x, shift_constant=beta, moment=t)
    raise ParameterError(f"unknown Z route {route!r}")


def z_direct(phi: Symbol, n: int, z) -> np.ndarray:
    return z_data(phi, n, "direct")(z)


def z_from_x(phi: Symbol, n: int, z, system: Optional[BopucSystem] = None) -> np.ndarray:
    return z_data(phi, n, "from-x", system)(z)


def z_from_x_shift(phi: Symbol, n: int, z, system: Optional[BopucSystem] = None) -> np.ndarray:
    return z_data(phi, n, "from-x-shift", system)(z)


def z_agreement(phi: Symbol, n: int, points, system: Optional[BopucSystem] = None) -> float:
    """Largest relative entrywise disagreement of the three Z constructions."""
    points = np.asarray(points, dtype=complex)
    values = [z_data(phi, n, route, system)(points) for route in ("direct", "from-x", "from-x-shift")]
    scale = max(1.0, max(float(np.max(np.abs(v))) for v in values))
    worst = max(float(np.max(np.abs(values[0] - v))) for v in values[1:])
    return worst / scale


def compatibility_residual(phi: Symbol, n: int, z: complex, system: Optional[BopucSystem] = None) -> float:
    """
    Residual of the linear system tying the first columns of X(z; n) and X(z; n-1):

        -(X1_12(n)/z) X21(n) + X1_12(n-1) X21(n-1) = -(1 + B/z) X11(n) + (z + beta) X11(n-1)
        X21(n)/z = (r/z) X11(n) + X11(n-1) / X1_12(n-1)

    with B = X1_12(n) r, r = X21(0; n)/X11(0; n) and
    beta = X1_22(n-1) - X2_12(n-1)/X1_12(n-1).
    """
    if n < 1:
        raise RangeError("compatibility needs n >= 1", {"n": n})
    if system is None or system.max_degree < n:
        system = compute_bopuc(phi, n)
    z = complex(z)
    if z == 0:
        raise ParameterError("compatibility is evaluated at z != 0")
    via_n = z_data(phi, n, "from-x", system)
    via_prev = z_data(phi, n, "from-x-shift", system)
    xn, xp = via_n.source, via_prev.source
    x11_n, _, x21_n, _ = (complex(v) for v in xn.entries(z))
    x11_p, _, x21_p, _ = (complex(v) for v in xp.entries(z))
    r = xn.x21_at_zero / xn.x11_at_zero
    t = via_prev.moment

    row1 = [-(via_n.moment / z) * x21_n, t * x21_p, (1.0 + via_n.b_constant / z) * x11_n, -(z + via_prev.shift_constant) * x11_p]
    row2 = [x21_n / z, -(r / z) * x11_n, -x11_p / t]
    residual = 0.0
    for terms in (row1, row2):
        scale = max(abs(v) for v in terms)
        if scale > 0:
            residual = max(residual, abs(sum(terms)) / scale)
    return residual


# Szegő parametrix


def analyticity_annulus(phi: Symbol, data: Optional[LogSymbolData] = None) -> Tuple[float, float]:
    """
    Annulus where phi^{-1} alpha^2 continues analytically.

    Combines the declared annulus with the decay rate of the log-symbol
    coefficients, which also sees zeros of phi that the declaration misses.
    """
    data = data or szego_data(phi)
    inner, outer = phi.annulus
    coeffs = data.log_coeffs
    scale = max(1.0, float(np.max(np.abs(coeffs.coeffs))))
    for k in range(data.trunc, 0, -1):
        value = abs(coeffs[-k])
        if value > DECAY_FLOOR * scale:
            inner = max(inner, value ** (1.0 / k)) if k >= 4 else inner
            break
    for k in range(data.trunc, 0, -1):
        value = abs(coeffs[k])
        if value > DECAY_FLOOR * scale:
            if k >= 4:
                outer = min(outer, value ** (-1.0 / k))
            break
    return inner, outer


def contour_radii(phi: Symbol, data: Optional[LogSymbolData] = None) -> Tuple[float, float]:
    """Default (r0, r1): geometric means of 1 with the annulus bounds."""
    inner, outer = analyticity_annulus(phi, data)
    r0 = math.sqrt(inner) if inner > 0 else 0.5
    r1 = math.sqrt(outer) if math.isfinite(outer) else 2.0
    return r0, r1


def _inner_weight(phi: Symbol, data: LogSymbolData, tau: np.ndarray) -> np.ndarray:
    """phi^{-1}(tau) alpha_in(tau)^2 on |tau| < 1."""
    return data.alpha_in(tau) ** 2 / phi(tau)


def _outer_weight(phi: Symbol, data: LogSymbolData, tau: np.ndarray) -> np.ndarray:
    """phi^{-1}(tau) alpha_out(tau)^{-2} on |tau| > 1."""
    return 1.0 / (phi(tau) * data.alpha_out(tau) ** 2)


def _contour_mean(sampler, radius: float, tol: float, label: str, start: int = 64, cap: int = 2 ** 16) -> complex:
    """(1/N) sum of sampler(tau_k) over tau_k = radius * exp(2 pi i k / N), doubled to convergence."""
    n_nodes = start
    previous = None
    while n_nodes <= cap:
        samples = sampler(radius * circle_nodes(n_nodes))
        if not np.all(np.isfinite(samples)):
            raise AccuracyError(f"{label}: integrand is not finite on |tau| = {radius}")
        current = complex(np.mean(samples))
        floor = 1e-16 * float(np.max(np.abs(samples)))
        if previous is not None and abs(current - previous) <= tol * abs(current) + floor:
            return current
        previous = current
        n_nodes *= 2
    raise AccuracyError(f"{label} did not converge within {cap} nodes", context={"radius": radius})


def c_n(phi: Symbol, n: int, r: Optional[float] = None, tol: float = 1e-12, data: Optional[LogSymbolData] = None) -> complex:
    """(1/2 pi i) * contour integral over |tau| = r < 1 of tau^n phi^{-1} alpha^2."""
    data = data or szego_data(phi)
    if r is None:
        r = contour_radii(phi, data)[0]
    if not (0.0 < r < 1.0):
        raise ParameterError(f"C_n contour radius must lie in (0, 1), got {r}")
    # d tau / (2 pi i) = tau d theta / (2 pi)
    return _contour_mean(lambda tau: tau ** (n + 1) * _inner_weight(phi, data, tau), r, tol, f"C_{n}")


def _check_contours(z: complex, radii: Tuple[float, float]) -> None:
    for radius in radii:
        if abs(abs(z) - radius) < CONTOUR_PROXIMITY:
            raise ContourProximityError(
                f"point {z} lies within {CONTOUR_PROXIMITY} of the contour |tau| = {radius}",
                {"z": z, "radius": radius},
            )


def r1(phi: Symbol, n: int, z: complex, radii: Optional[Tuple[float, float]] = None, tol: float = 1e-12) -> np.ndarray:
    """
    First correction R1(z; n), off-diagonal:

        R1_12 = -(1/2 pi i) int_{|tau|=r0} tau^n phi^{-1} alpha^2 / (tau - z) d tau
        R1_21 =  (1/2 pi i) int_{|tau|=r1} tau^{-n} phi^{-1} alpha^{-2} / (tau - z) d tau
    """
    data = szego_data(phi)
    r0, r1_radius = radii or contour_radii(phi, data)
    z = complex(z)
    _check_contours(z, (r0, r1_radius))
    upper = _contour_mean(
        lambda tau: tau ** (n + 1) * _inner_weight(phi, data, tau) / (tau - z), r0, tol, f"R1_12({n})"
    )
    lower = _contour_mean(
        lambda tau: tau ** (1 - n) * _outer_weight(phi, data, tau) / (tau - z), r1_radius, tol, f"R1_21({n})"
    )
    return np.array([[0.0, -upper], [lower, 0.0]], dtype=complex)


def region_of(z: complex, radii: Tuple[float, float]) -> str:
    r0, r1_radius = radii
    modulus = abs(z)
    if abs(modulus - 1.0) < CIRCLE_EPS:
        raise BoundaryError("the parametrix is two-valued on the unit circle", {"z": z})
    if modulus < r0:
        return "omega0"
    if modulus < 1.0:
        return "omega1"
    if modulus < r1_radius:
        return "omega2"
    return "omega_inf"


def x_asymptotic(
    phi: Symbol,
    n: int,
    z: complex,
    region: Optional[str] = None,
    radii: Optional[Tuple[float, float]] = None,
) -> np.ndarray:
    """(I + R1(z; n)) times the region's model solution."""
    data = szego_data(phi)
    radii = radii or contour_radii(phi, data)
    z = complex(z)
    _check_contours(z, radii)
    if region is not None and region not in REGIONS:
        raise ParameterError(f"unknown region {region!r}; expected one of {REGIONS}")
    actual = region_of(z, radii)
    if region is not None and region != actual:
        raise ParameterError(f"point {z} lies in {actual}, not {region}", {"z": z, "radii": radii})

    if actual in ("omega0", "omega1"):
        alpha = complex(data.alpha_in(z))
    else:
        alpha = complex(data.alpha_out(z))
    if actual == "omega0":
        model = np.array([[0.0, alpha], [-1.0 / alpha, 0.0]], dtype=complex)
    elif actual == "omega1":
        model = np.array([[z ** n * alpha / phi(z), alpha], [-1.0 / alpha, 0.0]], dtype=complex)
    elif actual == "omega2":
        model = np.array([[alpha * z ** n, 0.0], [-1.0 / (alpha * phi(z)), z ** (-n) / alpha]], dtype=complex)
    else:
        model = np.array([[alpha * z ** n, 0.0], [0.0, z ** (-n) / alpha]], dtype=complex)
    return (np.eye(2) + r1(phi, n, z, radii)) @ model


# Bordered and semi-framed determinants from RH data

BORDER_KINDS = ("pole", "bulk-pole", "bulk-z-ell", "monomial-z", "combination")


def _check_pole(c: complex) -> complex:
    c = complex(c)
    if abs(abs(c) - 1.0) < CIRCLE_EPS:
        raise PoleOnCircleError(f"pole {c} lies on the unit circle", {"pole": c})
    return c


def _plain_pole_ratio(value_11, c: complex, n: int) -> complex:
    """D^B_{n+1}[f; 1/(z - c)] / D_n[f] given f's first-row polynomial at c."""
    if abs(c) < 1.0:
        return 0j
    return -c ** (-(n + 1)) * complex(value_11)


def _phi_ratio(x: XData, kind: str, c, ell, border) -> complex:
    n = x.n
    if kind == "pole":
        c = _check_pole(c)
        return _plain_pole_ratio(np.polynomial.polynomial.polyval(c, x.x11), c, n)
    if kind == "bulk-pole":
        c = _check_pole(c)
        if c == 0:
            raise ParameterError("the bulk-pole border needs c != 0")
        return (complex(x.x12_series.cauchy(c)) - x.x12_taylor(0)) / c
    if kind == "bulk-z-ell":
        return x.x12_taylor(int(ell))
    if kind == "monomial-z":
        if n < 1:
            raise RangeError("the z border needs n >= 1")
        return complex(x.x11[n - 1])
    if kind == "combination":
        total = border.a0 * x.x12_taylor(0) + border.b0 * x.x12_taylor(1) + border.ahat0
        if n >= 1:
            total += border.ahat1 * complex(x.x11[n - 1])
        for c, b, b_hat in zip(border.poles, border.b, border.bhat):
            total += b * complex(x.x12_series.cauchy(c))
            total += b_hat * _plain_pole_ratio(np.polynomial.polynomial.polyval(c, x.x11), c, n)
        return total
    raise ParameterError(f"unknown border kind {kind!r}")


def _zphi_ratio(z: ZData, kind: str, c, ell, border) -> complex:
    n = z.n
    if kind == "pole":
        c = _check_pole(c)
        return _plain_pole_ratio(z.z11(c), c, n)
    if kind == "bulk-pole":
        c = _check_pole(c)
        if c == 0:
            raise ParameterError("the bulk-pole border needs c != 0")
        return (complex(z.z12(c)) - z.z12_taylor(0)) / c
    if kind == "bulk-z-ell":
        return z.z12_taylor(int(ell))
    if kind == "monomial-z":
        return z.leading_11()
    if kind == "combination":
        total = (
            border.a0 * z.z12_taylor(1)
            + border.a1 * z.z12_taylor(0)
            + border.b0 * z.z12_taylor(2)
            + border.ahat0
        )
        if n >= 1:
            total += border.ahat1 * z.leading_11()
        for c, b, b_hat in zip(border.poles, border.b, border.bhat):
            total += b * (complex(z.z12(c)) - z.z12_taylor(0)) / c
            total += b_hat * _plain_pole_ratio(z.z11(c), c, n)
        return total
    raise ParameterError(f"unknown border kind {kind!r}")


def bordered_via_rhp(
    phi: Symbol,
    n: int,
    kind: str,
    bulk: str = "phi",
    c: Optional[complex] = None,
    ell: Optional[int] = None,
    border: Optional["BorderSpec"] = None,
    system: Optional[BopucSystem] = None,
    route: str = "from-x",
) -> LogComplex:
    """
    D^B_{n+1}[f; psi] from RH data at index n, f = phi or z*phi.

    Border kinds: ``pole`` 1/(z - c), ``bulk-pole`` f/(z - c),
    ``bulk-z-ell`` z^{-ell} f, ``monomial-z`` z, and ``combination``
    q1 phi + q2 from a BorderSpec. Each is D_n[f] times an X (or Z)
    quantity: Taylor data of the 12-entry, values of the 11-entry at a
    pole outside the disk, or the subleading coefficient of the 11-entry.
    """
    if kind not in BORDER_KINDS:
        raise ParameterError(f"unknown border kind {kind!r}")
    if kind == "combination" and border is None:
        raise ParameterError("the combination kind needs a BorderSpec")
    if kind == "bulk-z-ell" and (ell is None or ell < 0):
        raise ParameterError("the bulk-z-ell kind needs ell >= 0")
    if system is None or system.max_degree < n:
        system = compute_bopuc(phi, n)
    d_n = system.toeplitz_dets[n]

    if bulk == "phi":
        x = x_data(phi, n, system)
        ratio = _phi_ratio(x, kind, c, ell, border)
        return d_n.scale(ratio) if ratio != 0 else LogComplex.zero()
    if bulk != "zphi":
        raise ParameterError(f"bulk must be 'phi' or 'zphi', got {bulk!r}")

    x = x_data(phi, n, system)
    # D_n[z phi] = (-1)^n X11(0; n) D_n[phi]
    d_n_zphi = d_n.scale((-1) ** n * x.x11_at_zero)
    if d_n_zphi.is_zero:
        raise PreconditionViolationError(f"D_{n}[z phi] vanishes", {"n": n})
    zdata = z_data(phi, n, route, system)
    ratio = _zphi_ratio(zdata, kind, c, ell, border)
    return d_n_zphi.scale(ratio) if ratio != 0 else LogComplex.zero()


def _bezout_matrix(p: np.ndarray, r: np.ndarray) -> np.ndarray:
    """B with (p(x) r(y) - r(x) p(y)) / (x - y) = sum_ij B_ij x^i y^j."""
    size = max(len(p), len(r))
    p = np.pad(p, (0, size - len(p)))
    r = np.pad(r, (0, size - len(r)))
    B = np.zeros((max(size - 1, 1), max(size - 1, 1)), dtype=complex)
    for a in range(size):
        for b in range(size):
            weight = p[a] * r[b]
            if weight == 0 or a == b:
                continue
            # (x^a y^b - x^b y^a) / (x - y)
            hi, lo, sign = (a, b, 1.0) if a > b else (b, a, -1.0)
            for k in range(hi - lo):
                B[lo + k, hi - 1 - k] += sign * weight
    return B


def semiframed_via_x(
    phi: Symbol,
    psi: Symbol,
    eta: Symbol,
    a: complex,
    n: int,
    variant: str = "H",
    method: str = "quadrature",
    tol: float = QUADRATURE_TOL,
    start_nodes: int = QUADRATURE_START,
    max_nodes: int = QUADRATURE_CAP,
    system: Optional[BopucSystem] = None,
) -> SemiframedValue:
    """
    F_{n+2}[phi; psi, eta; a] / D_{n+1}[phi] from the first columns of X.

    The integrand is f1(z1) f2(z2) det/(z1 - z2) with
    det = X11(z2; n+1) X21(z1; n+2) - X21(z2; n+2) X11(z1; n+1),
    that is p(z1) r(z2) - r(z1) p(z2) with p = X21(.; n+2), r = X11(.; n+1).
    ``coefficients`` expands the quotient as a Bezout matrix and pairs it
    with exact frame coefficients.
    """
    variant = variant.upper()
    if variant not in VARIANTS:
        raise ParameterError(f"unknown semi-framed variant {variant!r}")
    a = complex(a)
    if system is None or system.max_degree < n + 1:
        system = compute_bopuc(phi, n + 1)
    r = x11_coefficients(system, n + 1)
    p = x21_coefficients(system, n + 2)
    direct = direct_semiframed_ratio(phi, psi, eta, a, n, variant)

    if method == "coefficients":
        B = _bezout_matrix(p, r)
        idx = np.arange(B.shape[0])
        first = psi.coefficients_at(idx if variant in ("E", "L") else n - idx)
        second = eta.coefficients_at(idx if variant in ("G", "L") else n - idx)
        value = a - complex(first @ B @ second)
        return SemiframedValue(variant, n, value, direct, "x-coefficients")
    if method != "quadrature":
        raise ParameterError(f"unknown semi-framed method {method!r}")

    poly = np.polynomial.polynomial.polyval

    def rows(z1, z2):
        f1, f2 = frame_weights(variant, psi, eta, n, z1, z2, reflect_frames=True)
        p1, q1 = poly(z1, p)[:, None], poly(z1, r)[:, None]
        p2, q2 = poly(z2, p)[None, :], poly(z2, r)[None, :]
        quotient = (p1 * q2 - q1 * p2) / (z1[:, None] - z2[None, :])
        return f1[:, None] * quotient * f2[None, :]

    integral, nodes = adaptive_tensor_quadrature(rows, tol, start_nodes, max_nodes, f"X route {variant}")
    return SemiframedValue(variant, n, a - integral, direct, "x-quadrature", nodes)
