"""
Bi-orthogonal polynomials on the unit circle.

Everything is held in monic form: q_n has coefficients c_a (c_n = 1) with

    sum_a c_a phi_{m-a} = 0,  0 <= m < n,

q_hat_n has coefficients c_hat_a with sum_a c_hat_a phi_{a-m} = 0, and
kappa_n^2 = D_n / D_{n+1}. The normalized pair is Q_n = kappa_n q_n,
Q_hat_n = kappa_n q_hat_n; only products Q_j Q_hat_k ever enter a
computation, so kappa_n itself (and its sign) is never needed.
"""

import logging
from dataclasses import dataclass
from typing import Any, Dict, Optional, Tuple

import numpy as np
import scipy.linalg

from toeplitz_framework.core.exceptions import (
    AccuracyError,
    DegenerateMomentError,
    ParameterError,
    RangeError,
)
from toeplitz_framework.core.logcomplex import LogComplex
from toeplitz_framework.structmat import (
    DetKind,
    StructuredDetSpec,
    _toeplitz_block,
    build_matrix,
    det_log,
    semiframed_det,
    toeplitz_det,
)
from toeplitz_framework.symbols import Symbol, circle_nodes, polynomial_symbol

logger = logging.getLogger(__name__)

CONFLUENCE_EPS = 1e-9
QUADRATURE_START = 512
QUADRATURE_CAP = 4096
QUADRATURE_TOL = 1e-8
ROW_BLOCK = 512
VARIANTS = ("E", "G", "H", "L")


@dataclass(frozen=True, eq=False)
class BopucSystem:
    """
    Monic bi-orthogonal polynomials of degree 0..N for one symbol.

    Row k of ``monic_q`` (``monic_qhat``) holds the ascending coefficients
    of q_k (q_hat_k), zero above the diagonal. ``toeplitz_dets`` holds
    D_0..D_{N+1} from independent LU determinants; ``kappa_sq`` comes from
    the linear solves.
    """

    symbol: Symbol
    max_degree: int
    toeplitz_dets: Tuple[LogComplex, ...]
    monic_q: np.ndarray
    monic_qhat: np.ndarray
    kappa_sq: np.ndarray

    def _check_degree(self, n: int) -> None:
        if n < 0 or n > self.max_degree:
            raise RangeError(
                f"degree {n} outside the constructed range [0, {self.max_degree}]",
                {"n": n, "max_degree": self.max_degree},
            )

    def q(self, n: int, z):
        self._check_degree(n)
        return np.polynomial.polynomial.polyval(np.asarray(z, dtype=complex), self.monic_q[n, : n + 1])

    def qhat(self, n: int, z):
        self._check_degree(n)
        return np.polynomial.polynomial.polyval(np.asarray(z, dtype=complex), self.monic_qhat[n, : n + 1])

    def q_reversed(self, n: int, z):
        """z^n q_n(1/z), evaluated as a polynomial so z = 0 is allowed."""
        self._check_degree(n)
        return np.polynomial.polynomial.polyval(np.asarray(z, dtype=complex), self.monic_q[n, n::-1])

    def qhat_reversed(self, n: int, z):
        """z^n q_hat_n(1/z)."""
        self._check_degree(n)
        return np.polynomial.polynomial.polyval(np.asarray(z, dtype=complex), self.monic_qhat[n, n::-1])

    def q_derivative(self, n: int, z):
        self._check_degree(n)
        coeffs = np.polynomial.polynomial.polyder(self.monic_q[n, : n + 1])
        return np.polynomial.polynomial.polyval(np.asarray(z, dtype=complex), coeffs)

    def qhat_derivative(self, n: int, z):
        self._check_degree(n)
        coeffs = np.polynomial.polynomial.polyder(self.monic_qhat[n, : n + 1])
        return np.polynomial.polynomial.polyval(np.asarray(z, dtype=complex), coeffs)

    def dets_ratio(self, n: int) -> complex:
        """D_n / D_{n+1} from the stored determinants."""
        return (self.toeplitz_dets[n] / self.toeplitz_dets[n + 1]).to_complex()

    def to_dict(self) -> Dict[str, Any]:
        return {
            "symbol": self.symbol.name,
            "max_degree": self.max_degree,
            "kappa_sq_re": self.kappa_sq.real.tolist(),
            "kappa_sq_im": self.kappa_sq.imag.tolist(),
            "toeplitz_dets": [d.to_dict() for d in self.toeplitz_dets],
        }


def compute_bopuc(phi: Symbol, max_degree: int) -> BopucSystem:
    """
    Monic q_n, q_hat_n for n <= max_degree by Toeplitz linear solves.

    Raises DegenerateMomentError(k) for the first vanishing D_k, k <= N+1.
    """
    if max_degree < 0:
        raise RangeError("max_degree must be non-negative", {"max_degree": max_degree})
    size = max_degree + 1
    # T[m, a] = phi_{m-a}
    T = _toeplitz_block(phi, size + 1, size + 1)

    dets = [LogComplex.one()]
    for k in range(1, size + 2):
        d_k = det_log(T[:k, :k])
        if d_k.is_zero:
            raise DegenerateMomentError(k, {"symbol": phi.name})
        dets.append(d_k)

    monic_q = np.zeros((size, size), dtype=complex)
    monic_qhat = np.zeros((size, size), dtype=complex)
    kappa_sq = np.empty(size, dtype=complex)
    for n in range(size):
        monic_q[n, n] = 1.0
        monic_qhat[n, n] = 1.0
        if n > 0:
            block = T[:n, :n]
            monic_q[n, :n] = scipy.linalg.solve(block, -T[:n, n])
            monic_qhat[n, :n] = scipy.linalg.solve(block.T, -T[n, :n])
        h_n = np.dot(T[n, : n + 1], monic_q[n, : n + 1])
        if h_n == 0:
            raise DegenerateMomentError(n + 1, {"symbol": phi.name})
        kappa_sq[n] = 1.0 / h_n

    logger.debug("BOPUC for %s up to degree %d", phi.name, max_degree)
    return BopucSystem(
        symbol=phi,
        max_degree=max_degree,
        toeplitz_dets=tuple(dets),
        monic_q=monic_q,
        monic_qhat=monic_qhat,
        kappa_sq=kappa_sq,
    )


def determinantal_polynomials(phi: Symbol, n: int, z: complex) -> Tuple[complex, complex]:
    """
    (q_n(z), q_hat_n(z)) straight from the bordered determinant formulas.

    Cost grows like n^4 through the cofactor route; intended as a cross-check
    for small n.
    """
    if n < 0:
        raise RangeError("degree must be non-negative", {"n": n})
    T = _toeplitz_block(phi, n + 1, n + 1)
    powers = np.asarray(complex(z)) ** np.arange(n + 1)
    d_n = det_log(T[:n, :n])
    if d_n.is_zero:
        raise DegenerateMomentError(n, {"symbol": phi.name})
    rows = np.vstack([T[:n, :], powers[None, :]])
    cols = np.hstack([T[:, :n], powers[:, None]])
    return (det_log(rows) / d_n).to_complex(), (det_log(cols) / d_n).to_complex()


def _bi_matrix_coefficients(system: BopucSystem, k_max: int) -> np.ndarray:
    """B[k, m] = integral of q_k(s) q_hat_m(1/s) phi(s), from coefficients."""
    size = k_max + 1
    T = _toeplitz_block(system.symbol, size, size)
    A = system.monic_q[:size, :size]
    B_hat = system.monic_qhat[:size, :size]
    return (B_hat @ T @ A.T).T


def _bi_matrix_quadrature(system: BopucSystem, k_max: int, tol: float) -> np.ndarray:
    n_nodes = QUADRATURE_START
    previous = None
    while n_nodes <= 2 ** 16:
        s = circle_nodes(n_nodes)
        weights = system.symbol(s) / n_nodes
        qs = np.array([system.q(k, s) for k in range(k_max + 1)])
        qh = np.array([system.qhat(k, 1.0 / s) for k in range(k_max + 1)])
        current = (qs * weights[None, :]) @ qh.T
        if previous is not None and np.max(np.abs(current - previous)) <= tol * max(1.0, np.max(np.abs(current))):
            return current
        previous = current
        n_nodes *= 2
    raise AccuracyError("bi-orthogonality quadrature did not converge", context={"k_max": k_max})


def biorthogonality_residual(system: BopucSystem, k_max: Optional[int] = None, method: str = "quadrature", tol: float = 1e-12) -> float:
    """
    Largest deviation of the normalized pairing matrix from the identity.

    With B[k, m] the monic pairing, the normalized entry is
    kappa_k kappa_m B[k, m]; the diagonal is tested as kappa_k^2 B[k, k] - 1
    and off-diagonal entries through |B| sqrt(|kappa_k^2| |kappa_m^2|).
    """
    k_max = system.max_degree if k_max is None else k_max
    system._check_degree(k_max)
    if method == "quadrature":
        B = _bi_matrix_quadrature(system, k_max, tol)
    elif method == "coefficients":
        B = _bi_matrix_coefficients(system, k_max)
    else:
        raise ParameterError(f"unknown bi-orthogonality method {method!r}")
    ksq = system.kappa_sq[: k_max + 1]
    scale = np.sqrt(np.outer(np.abs(ksq), np.abs(ksq)))
    deviation = np.abs(B) * scale
    np.fill_diagonal(deviation, np.abs(ksq * np.diag(B) - 1.0))
    return float(np.max(deviation))


@dataclass(frozen=True)
class RecurrenceResiduals:
    """
    Residuals of the four recurrence relations at one point.

    (a) (k_n^2/k_{n+1}^2) z q_n(z) = q_{n+1}(z) - r_{n+1} z^{n+1} q_hat_{n+1}(1/z)
    (b) k_n^2 q_hat_n(1/z) / z = k_{n+1}^2 [q_hat_{n+1}(1/z) - r_hat_{n+1} z^{-n-1} q_{n+1}(z)]
    (c) q_hat_n(1/z) / z = q_hat_{n+1}(1/z) - r_hat_{n+1} z^{-n} q_n(z)
    (d) k_{n+1}^2 - k_n^2 = k_{n+1}^2 r_{n+1} r_hat_{n+1}

    with r = q_{n+1}(0), r_hat = q_hat_{n+1}(0). At z = 0 only (d) is evaluated.
    """

    a: Optional[float]
    b: Optional[float]
    c: Optional[float]
    d: float

    def as_tuple(self) -> Tuple[Optional[float], ...]:
        return (self.a, self.b, self.c, self.d)

    @property
    def max(self) -> float:
        return max(v for v in self.as_tuple() if v is not None)


def _relative(terms) -> float:
    scale = max(abs(t) for t in terms)
    if scale == 0:
        return 0.0
    return abs(sum(terms)) / scale


def recurrence_residuals(system: BopucSystem, n: int, z: complex) -> RecurrenceResiduals:
    system._check_degree(n + 1)
    z = complex(z)
    k0, k1 = complex(system.kappa_sq[n]), complex(system.kappa_sq[n + 1])
    r = complex(system.monic_q[n + 1, 0])
    r_hat = complex(system.monic_qhat[n + 1, 0])
    d = _relative([k1, -k0, -k1 * r * r_hat])
    if z == 0:
        return RecurrenceResiduals(None, None, None, d)

    q_n, q_n1 = complex(system.q(n, z)), complex(system.q(n + 1, z))
    qh_n_inv = complex(system.qhat(n, 1.0 / z))
    qh_n1_inv = complex(system.qhat(n + 1, 1.0 / z))
    # z^{n+1} q_hat_{n+1}(1/z) as a polynomial
    qh_n1_rev = complex(system.qhat_reversed(n + 1, z))

    a = _relative([(k0 / k1) * z * q_n, -q_n1, r * qh_n1_rev])
    b = _relative([k0 * qh_n_inv / z, -k1 * qh_n1_inv, k1 * r_hat * q_n1 * z ** (-(n + 1))])
    c = _relative([qh_n_inv / z, -qh_n1_inv, r_hat * q_n * z ** (-n)])
    return RecurrenceResiduals(a, b, c, d)


@dataclass(frozen=True)
class KernelValue:
    """K_n(z, zeta) = sum_{j<=n} Q_j(zeta) Q_hat_j(z), with its Christoffel-Darboux evaluation."""

    z: complex
    zeta: complex
    value: complex
    n: int
    cd_value: Optional[complex] = None

    @property
    def discrepancy(self) -> Optional[float]:
        if self.cd_value is None:
            return None
        scale = max(abs(self.value), abs(self.cd_value), 1e-300)
        return abs(self.value - self.cd_value) / scale


def kernel_direct(system: BopucSystem, n: int, z, zeta):
    system._check_degree(n)
    z = np.asarray(z, dtype=complex)
    zeta = np.asarray(zeta, dtype=complex)
    total = np.zeros(np.broadcast(z, zeta).shape, dtype=complex)
    for j in range(n + 1):
        total = total + system.kappa_sq[j] * system.q(j, zeta) * system.qhat(j, z)
    return total


def kernel_cd(system: BopucSystem, n: int, z, zeta):
    """
    Christoffel-Darboux form of K_n, needs degree n+1.

    Off the confluent set z*zeta = 1 the quotient form is used; on it the
    derivative form in w = zeta.
    """
    m = n + 1
    system._check_degree(m)
    z = np.asarray(z, dtype=complex)
    zeta = np.asarray(zeta, dtype=complex)
    z, zeta = np.broadcast_arrays(z, zeta)
    k = system.kappa_sq[m]
    gap = 1.0 - z * zeta
    confluent = np.abs(gap) < CONFLUENCE_EPS * (1.0 + np.abs(z * zeta))
    out = np.empty(z.shape, dtype=complex)

    regular = ~confluent
    if np.any(regular):
        zr, wr = z[regular], zeta[regular]
        numerator = system.q_reversed(m, zr) * system.qhat_reversed(m, wr) - system.qhat(m, zr) * system.q(m, wr)
        out[regular] = k * numerator / gap[regular]
    if np.any(confluent):
        w = zeta[confluent]
        q_w = system.q(m, w)
        qh_inv = system.qhat(m, 1.0 / w)
        # d/dw q_hat(1/w) = -w^{-2} q_hat'(1/w)
        d_qh_inv = -system.qhat_derivative(m, 1.0 / w) / w ** 2
        out[confluent] = k * (-m * q_w * qh_inv + w * (qh_inv * system.q_derivative(m, w) - q_w * d_qh_inv))
    if out.ndim == 0:
        return complex(out)
    return out


def reproducing_kernel(system: BopucSystem, n: int, z: complex, zeta: complex) -> KernelValue:
    value = complex(kernel_direct(system, n, z, zeta))
    cd_value = complex(kernel_cd(system, n, z, zeta)) if n + 1 <= system.max_degree else None
    return KernelValue(complex(z), complex(zeta), value, n, cd_value)


def kernel_det_identity(phi: Symbol, n: int, z: complex, zeta: complex, a: complex = 0.0) -> float:
    """
    Residual of K_n(z, zeta) = a - K_hat_n(z, zeta; a).

    K_hat is the H semi-framed determinant of size n+2 with column
    coefficients z^j and row coefficients zeta^(n-m), divided by D_{n+1}.
    """
    system = compute_bopuc(phi, n)
    z, zeta, a = complex(z), complex(zeta), complex(a)
    kernel = complex(kernel_direct(system, n, z, zeta))
    psi = polynomial_symbol(z ** np.arange(n + 1), name="z-powers")
    eta = polynomial_symbol(zeta ** (n - np.arange(n + 1)), name="zeta-powers")
    framed = semiframed_det("H", phi, psi, eta, a, n + 2)
    k_hat = (framed / system.toeplitz_dets[n + 1]).to_complex()
    return _relative([kernel, -a, k_hat])


def lu_factorization_residual(phi: Symbol, n: int) -> float:
    """
    max |(B T_{n+1} A^T - I)_{mu nu}| for the normalized triangles.

    With monic triangles the product is diag(1/kappa^2); entry (mu, nu) is
    rescaled by sqrt(|kappa_mu^2 kappa_nu^2|), the diagonal by kappa_mu^2.
    """
    system = compute_bopuc(phi, n)
    size = n + 1
    T = build_matrix(StructuredDetSpec(DetKind.PURE, size, phi))
    product = system.monic_qhat @ T @ system.monic_q.T
    ksq = system.kappa_sq
    deviation = np.abs(product) * np.sqrt(np.outer(np.abs(ksq), np.abs(ksq)))
    np.fill_diagonal(deviation, np.abs(ksq * np.diag(product) - 1.0))
    return float(np.max(deviation))


def h_form_frames(variant: str, psi: Symbol, eta: Symbol, size: int) -> Tuple[Symbol, Symbol]:
    """
    Frame symbols (psi', eta') with variant_size[phi; psi, eta; a] = H_size[phi; psi', eta'; a].

    Uses (z^{N-2} f~)_j = f_{N-2-j}.
    """
    variant = variant.upper()
    flip = size - 2
    if variant == "H":
        return psi, eta
    if variant == "E":
        return psi.reflect().shift(flip), eta
    if variant == "G":
        return psi, eta.reflect().shift(flip)
    if variant == "L":
        return psi.reflect().shift(flip), eta.reflect().shift(flip)
    raise ParameterError(f"unknown semi-framed variant {variant!r}")


@dataclass(frozen=True)
class SemiframedValue:
    """A semi-framed ratio F_{n+2}/D_{n+1} from an integral route next to the direct one."""

    variant: str
    n: int
    value: complex
    direct: complex
    method: str
    nodes: int = 0

    @property
    def residual(self) -> float:
        scale = max(abs(self.direct), abs(self.value))
        if scale == 0:
            return 0.0
        return abs(self.value - self.direct) / scale

    def to_record(self) -> Dict[str, Any]:
        return {
            "variant": self.variant,
            "n": self.n,
            "value": [self.value.real, self.value.imag],
            "direct": [self.direct.real, self.direct.imag],
            "method": self.method,
            "nodes": self.nodes,
            "residual": self.residual,
        }


def direct_semiframed_ratio(phi: Symbol, psi: Symbol, eta: Symbol, a: complex, n: int, variant: str) -> complex:
    framed = semiframed_det(variant, phi, psi, eta, a, n + 2)
    return (framed / toeplitz_det(phi, n + 1)).to_complex()


def frame_weights(variant: str, psi: Symbol, eta: Symbol, n: int, z1: np.ndarray, z2: np.ndarray, reflect_frames: bool):
    """
    Weights f1(z1), f2(z2) of the semi-framed double integrals.

    Kernel route (reflect_frames False): H takes z1-free psi and z2^{-n} eta
    and so on per variant. X route (reflect_frames True) uses psi~ / eta~ in
    place of the z^{-n} factor on the reflected side.
    """
    variant = variant.upper()
    if variant not in VARIANTS:
        raise ParameterError(f"unknown semi-framed variant {variant!r}")
    if not reflect_frames:
        f1 = psi(z1) * (z1 ** (-n) if variant in ("E", "L") else 1.0)
        f2 = eta(z2) * (z2 ** (-n) if variant in ("H", "E") else 1.0)
        return f1, f2
    f1 = psi(1.0 / z1) if variant in ("E", "L") else z1 ** (-n) * psi(z1)
    f2 = eta(1.0 / z2) if variant in ("G", "L") else z2 ** (-n) * eta(z2)
    return f1, f2


def _kernel_arguments(variant: str, z1: np.ndarray, z2: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    if variant == "H":
        return 1.0 / z1, z2
    if variant == "E":
        return z1, z2
    if variant == "G":
        return 1.0 / z1, 1.0 / z2
    return z1, 1.0 / z2


def tensor_quadrature(
    integrand_rows,
    n_nodes: int,
) -> complex:
    """Mean of integrand_rows(z1_block, z2) over the offset tensor grid, in row blocks."""
    z1 = circle_nodes(n_nodes)
    z2 = circle_nodes(n_nodes, offset=0.5)
    total = 0j
    for start in range(0, n_nodes, ROW_BLOCK):
        block = z1[start: start + ROW_BLOCK]
        total += complex(np.sum(integrand_rows(block, z2)))
    return total / n_nodes ** 2


def adaptive_tensor_quadrature(integrand_rows, tol: float, start_nodes: int, max_nodes: int, label: str) -> Tuple[complex, int]:
    n_nodes = start_nodes
    previous = tensor_quadrature(integrand_rows, n_nodes)
    current = previous
    while n_nodes < max_nodes:
        n_nodes *= 2
        current = tensor_quadrature(integrand_rows, n_nodes)
        if abs(current - previous) <= tol * max(1.0, abs(current)):
            logger.debug("%s converged at %d nodes per circle", label, n_nodes)
            return current, n_nodes
        previous = current
    raise AccuracyError(
        f"{label} did not converge within {max_nodes} nodes per circle",
        abs(current - previous),
        {"max_nodes": max_nodes},
    )


def semiframed_via_kernel(
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
    F_{n+2}[phi; psi, eta; a] / D_{n+1}[phi] through the reproducing kernel.

    ``quadrature`` integrates a - K(., .) f1 f2 over the torus with the
    Christoffel-Darboux kernel (needs degree n+1). ``coefficients`` uses the
    same representation with exact frame coefficients,
    a - sum_k kappa_k^2 (v . c^(k)) (c_hat^(k) . u), suited to symbols
    with jumps.
    """
    variant = variant.upper()
    if variant not in VARIANTS:
        raise ParameterError(f"unknown semi-framed variant {variant!r}")
    a = complex(a)
    direct = direct_semiframed_ratio(phi, psi, eta, a, n, variant)

    if method == "coefficients":
        if system is None or system.max_degree < n:
            system = compute_bopuc(phi, n)
        idx = np.arange(n + 1)
        u = psi.coefficients_at(n - idx if variant in ("E", "L") else idx)
        v = eta.coefficients_at(n - idx if variant in ("H", "E") else idx)
        s_eta = system.monic_q[: n + 1, : n + 1] @ v
        s_psi = system.monic_qhat[: n + 1, : n + 1] @ u
        value = a - complex(np.sum(system.kappa_sq[: n + 1] * s_eta * s_psi))
        return SemiframedValue(variant, n, value, direct, method)

    if method != "quadrature":
        raise ParameterError(f"unknown semi-framed method {method!r}")
    if system is None or system.max_degree < n + 1:
        system = compute_bopuc(phi, n + 1)

    def rows(z1, z2):
        f1, f2 = frame_weights(variant, psi, eta, n, z1, z2, reflect_frames=False)
        first, second = _kernel_arguments(variant, z1[:, None], z2[None, :])
        return f1[:, None] * kernel_cd(system, n, first, second) * f2[None, :]

    integral, nodes = adaptive_tensor_quadrature(rows, tol, start_nodes, max_nodes, f"kernel route {variant}")
    return SemiframedValue(variant, n, a - integral, direct, method, nodes)
