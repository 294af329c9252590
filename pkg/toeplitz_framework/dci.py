"""
Dodgson condensation and the structured reductions built from it.

For a square matrix M and rows j1 < j2, columns k1 < k2:

    M * M{j1 j2; k1 k2} = M{j1; k1} M{j2; k2} - M{j1; k2} M{j2; k1}

Each reduction builds its constituents independently through
``structmat`` and reports the residual of the identity relative to the
largest term. Identities are checked in product form; a vanishing
denominator is flagged, never divided through.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Sequence, Tuple

import numpy as np

from toeplitz_framework.core.exceptions import MatrixIndexError, ShapeError, SpecError
from toeplitz_framework.core.logcomplex import (
    LogComplex,
    identity_residual,
    log_combination,
    relative_difference,
)
from toeplitz_framework.structmat import (
    DetKind,
    StructuredDetSpec,
    bordered_det,
    build_matrix,
    det_log,
    framed_spec,
    minor_det,
    semiframed_det,
    structured_det,
    toeplitz_det,
)
from toeplitz_framework.symbols import Symbol

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DciReport:
    """
    Outcome of one condensation identity.

    ``lhs`` is (M, M{j1 j2; k1 k2}); ``rhs`` is
    (M{j1;k1}, M{j2;k2}, M{j1;k2}, M{j2;k1}). ``residual`` is the relative
    defect of the identity; ``checks`` holds further named residuals (for
    example constituent-versus-minor agreement).
    """

    identity: str
    n: int
    lhs: Tuple[LogComplex, LogComplex]
    rhs: Tuple[LogComplex, LogComplex, LogComplex, LogComplex]
    residual: float
    constituents: Dict[str, LogComplex] = field(default_factory=dict)
    checks: Dict[str, float] = field(default_factory=dict)
    degenerate: bool = False

    @property
    def max_residual(self) -> float:
        return max([self.residual] + list(self.checks.values()))

    def passed(self, tol: float) -> bool:
        return self.max_residual < tol

    def to_record(self) -> Dict[str, Any]:
        terms = [{"name": name, **value.to_dict()} for name, value in self.constituents.items()]
        return {
            "identity": self.identity,
            "n": self.n,
            "terms": terms,
            "residual": self.residual,
            "checks": dict(self.checks),
            "degenerate": self.degenerate,
        }


def _condensation_residual(lhs: Tuple[LogComplex, LogComplex], rhs: Sequence[LogComplex]) -> float:
    a, b, c, d = rhs
    return identity_residual([(1.0, lhs[0] * lhs[1])], [(1.0, a * b), (-1.0, c * d)])


def dodgson_residual(matrix, j1: int, j2: int, k1: int, k2: int, identity: str = "dodgson") -> DciReport:
    """Residual of the condensation identity for explicit row/column pairs."""
    a = np.asarray(matrix, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ShapeError(f"condensation needs a square matrix, got shape {a.shape}")
    size = a.shape[0]
    if size < 2:
        raise ShapeError("condensation needs a matrix of size at least 2")
    if not (0 <= j1 < j2 < size and 0 <= k1 < k2 < size):
        raise MatrixIndexError(f"invalid condensation indices ({j1},{j2};{k1},{k2}) for size {size}")

    lhs = (det_log(a), minor_det(a, [j1, j2], [k1, k2]))
    rhs = (
        minor_det(a, [j1], [k1]),
        minor_det(a, [j2], [k2]),
        minor_det(a, [j1], [k2]),
        minor_det(a, [j2], [k1]),
    )
    return DciReport(identity, size, lhs, rhs, _condensation_residual(lhs, rhs))


def _minor_agreement(matrix: np.ndarray, expected: Dict[Tuple[Tuple[int, ...], Tuple[int, ...]], LogComplex]) -> float:
    worst = 0.0
    for (rows, cols), value in expected.items():
        worst = max(worst, relative_difference(minor_det(matrix, rows, cols), value))
    return worst


def reduce_two_bordered(phi: Symbol, psi1: Symbol, psi2: Symbol, n: int) -> DciReport:
    """
    D^B_n[phi; psi1, psi2] * D_{n-2}[z phi]
        = D^B_{n-1}[z phi; psi2] D^B_{n-1}[phi; psi1/z] - D^B_{n-1}[z phi; psi1] D^B_{n-1}[phi; psi2/z]
    """
    if n < 3:
        raise SpecError("two-bordered reduction needs n >= 3", {"n": n})
    z_phi = phi.shift(1)
    matrix = build_matrix(StructuredDetSpec(DetKind.MULTI_BORDERED, n, phi, (psi1, psi2), frames=2))

    full = det_log(matrix)
    inner = structured_det(StructuredDetSpec(DetKind.PURE_ROW, n - 2, z_phi))
    zphi_psi2 = bordered_det(z_phi, psi2, n - 1)
    phi_psi1 = bordered_det(phi, psi1.shift(-1), n - 1)
    zphi_psi1 = bordered_det(z_phi, psi1, n - 1)
    phi_psi2 = bordered_det(phi, psi2.shift(-1), n - 1)

    lhs = (full, inner)
    rhs = (zphi_psi2, phi_psi1, zphi_psi1, phi_psi2)
    agreement = _minor_agreement(matrix, {
        ((0, n - 1), (n - 2, n - 1)): inner,
        ((0,), (n - 2,)): zphi_psi2,
        ((n - 1,), (n - 1,)): phi_psi1,
        ((0,), (n - 1,)): zphi_psi1,
        ((n - 1,), (n - 2,)): phi_psi2,
    })
    report = DciReport(
        identity="two-bordered",
        n=n,
        lhs=lhs,
        rhs=rhs,
        residual=_condensation_residual(lhs, rhs),
        constituents={
            "D^B_n[phi;psi1,psi2]": full,
            "D_{n-2}[z phi]": inner,
            "D^B_{n-1}[z phi;psi2]": zphi_psi2,
            "D^B_{n-1}[phi;psi1/z]": phi_psi1,
            "D^B_{n-1}[z phi;psi1]": zphi_psi1,
            "D^B_{n-1}[phi;psi2/z]": phi_psi2,
        },
        checks={"minor_agreement": agreement},
        degenerate=inner.is_zero,
    )
    logger.debug("two-bordered reduction n=%d residual=%.3e", n, report.residual)
    return report


def reduce_three_bordered(phi: Symbol, psi1: Symbol, psi2: Symbol, psi3: Symbol, n: int) -> DciReport:
    """
    D^B_n[phi; psi1, psi2, psi3] * D^B_{n-2}[z phi; psi1/z]
        = D^B_{n-1}[z phi; psi1, psi3] D^B_{n-1}[phi; psi1/z, psi2/z]
        - D^B_{n-1}[z phi; psi1, psi2] D^B_{n-1}[phi; psi1/z, psi3/z]
    """
    if n < 4:
        raise SpecError("three-bordered reduction needs n >= 4", {"n": n})
    z_phi = phi.shift(1)
    psi1_z, psi2_z, psi3_z = psi1.shift(-1), psi2.shift(-1), psi3.shift(-1)
    matrix = build_matrix(StructuredDetSpec(DetKind.MULTI_BORDERED, n, phi, (psi1, psi2, psi3), frames=3))

    full = det_log(matrix)
    inner = bordered_det(z_phi, psi1_z, n - 2)
    a = bordered_det(z_phi, (psi1, psi3), n - 1)
    b = bordered_det(phi, (psi1_z, psi2_z), n - 1)
    c = bordered_det(z_phi, (psi1, psi2), n - 1)
    d = bordered_det(phi, (psi1_z, psi3_z), n - 1)

    lhs, rhs = (full, inner), (a, b, c, d)
    agreement = _minor_agreement(matrix, {
        ((0, n - 1), (n - 2, n - 1)): inner,
        ((0,), (n - 2,)): a,
        ((n - 1,), (n - 1,)): b,
        ((0,), (n - 1,)): c,
        ((n - 1,), (n - 2,)): d,
    })
    return DciReport(
        identity="three-bordered",
        n=n,
        lhs=lhs,
        rhs=rhs,
        residual=_condensation_residual(lhs, rhs),
        constituents={
            "D^B_n[phi;psi1,psi2,psi3]": full,
            "D^B_{n-2}[z phi;psi1/z]": inner,
            "D^B_{n-1}[z phi;psi1,psi3]": a,
            "D^B_{n-1}[phi;psi1/z,psi2/z]": b,
            "D^B_{n-1}[z phi;psi1,psi2]": c,
            "D^B_{n-1}[phi;psi1/z,psi3/z]": d,
        },
        checks={"minor_agreement": agreement},
        degenerate=inner.is_zero,
    )


def reduce_framed(spec: StructuredDetSpec) -> DciReport:
    """
    Framed determinant of size n+3 against four semi-framed ones of size n+2.

    M: M D_{n+1} = H[psi,eta;a3] E[gamma,xi;a1] - E[gamma,eta;a4] H[psi,xi;a2]
    N: N D_{n+1} = E[psi,eta;a3] G[gamma,xi;a1] - H[gamma,eta;a4] L[psi,xi;a2]
    """
    if spec.kind not in (DetKind.FRAMED_M, DetKind.FRAMED_N):
        raise SpecError(f"framed reduction needs a FRAMED_M or FRAMED_N spec, got {spec.kind.value}")
    size = spec.size
    phi = spec.bulk
    xi, psi, eta, gamma = spec.borders
    a1, a2, a3, a4 = spec.corners
    matrix = build_matrix(spec)
    full = det_log(matrix)

    pure = toeplitz_det(phi, size - 2)
    if spec.kind is DetKind.FRAMED_M:
        labels = ("H[psi,eta;a3]", "E[gamma,xi;a1]", "E[gamma,eta;a4]", "H[psi,xi;a2]")
        rhs = (
            semiframed_det("H", phi, psi, eta, a3, size - 1),
            semiframed_det("E", phi, gamma, xi, a1, size - 1),
            semiframed_det("E", phi, gamma, eta, a4, size - 1),
            semiframed_det("H", phi, psi, xi, a2, size - 1),
        )
    else:
        labels = ("E[psi,eta;a3]", "G[gamma,xi;a1]", "H[gamma,eta;a4]", "L[psi,xi;a2]")
        rhs = (
            semiframed_det("E", phi, psi, eta, a3, size - 1),
            semiframed_det("G", phi, gamma, xi, a1, size - 1),
            semiframed_det("H", phi, gamma, eta, a4, size - 1),
            semiframed_det("L", phi, psi, xi, a2, size - 1),
        )
    lhs = (full, pure)
    direct = dodgson_residual(matrix, 0, size - 1, 0, size - 1)
    constituents = {f"{spec.kind.value}": full, "D_{n+1}[phi]": pure}
    constituents.update(dict(zip(labels, rhs)))
    return DciReport(
        identity=spec.kind.value,
        n=size - 3,
        lhs=lhs,
        rhs=rhs,
        residual=_condensation_residual(lhs, rhs),
        constituents=constituents,
        checks={"direct_condensation": direct.residual},
        degenerate=pure.is_zero,
    )


def _framed(phi: Symbol, frame: Sequence[Symbol], corners: Sequence[complex], size: int) -> LogComplex:
    xi, psi, eta, gamma = frame
    return structured_det(framed_spec("M", phi, xi, psi, eta, gamma, corners, size))


def _closing(
    numerator: Sequence[LogComplex],
    denominator: LogComplex,
    sign: float,
) -> Optional[LogComplex]:
    """sign * (A B - C D) / denominator; None when the denominator vanishes."""
    if denominator.is_zero:
        return None
    a, b, c, d = numerator
    return log_combination([(sign, a * b), (-sign, c * d)]) / denominator


def reduce_two_framed(spec: StructuredDetSpec) -> DciReport:
    """
    Two-framed determinant K of size n+5.

    The main identity condenses on rows/columns {0, n+4}. Each single-removal
    minor is then re-derived from framed determinants of size n+3 through an
    auxiliary condensation whose remaining factor is semi-framed; the four
    closing residuals compare those expressions with the direct minors, and
    the chain residual rebuilds K from framed and semi-framed determinants
    alone.
    """
    if spec.kind not in (DetKind.TWO_FRAMED_K, DetKind.MULTI_FRAMED) or spec.frames != 2:
        raise SpecError("two-framed reduction needs a two-frame spec")
    N = spec.size
    n = N - 5
    if n < 0:
        raise SpecError("two-framed reduction needs size at least 5")
    phi = spec.bulk
    xi1, psi1, eta1, gamma1, xi2, psi2, eta2, gamma2 = spec.borders
    a1, a2, a3, a4, a5, a6, a7, a8 = spec.corners
    last = N - 1

    matrix = build_matrix(spec)
    main = dodgson_residual(matrix, 0, last, 0, last, identity="two-framed-K")
    inner_corners = (a1, a2, a3, a4)
    inner = _framed(phi, (xi1, psi1, eta1, gamma1), inner_corners, n + 3)

    xi2_z, psi2_z, eta2_z, gamma2_z = xi2.shift(-1), psi2.shift(-1), eta2.shift(-1), gamma2.shift(-1)
    psi2_0, psi2_top = psi2.coeff(0), psi2.coeff(n + 2)
    eta2_0, eta2_top = eta2.coeff(0), eta2.coeff(n + 2)
    xi2_0, xi2_top = xi2.coeff(0), xi2.coeff(n + 2)
    gamma2_0, gamma2_top = gamma2.coeff(0), gamma2.coeff(n + 2)
    parity = (-1.0) ** (n + 1)
    size = n + 3

    den_00 = semiframed_det("E", phi, gamma1, xi1, a1, n + 2)
    den_44 = semiframed_det("H", phi, psi1, eta1, a3, n + 2)
    den_04 = semiframed_det("H", phi, psi1, xi1, a2, n + 2)
    den_40 = semiframed_det("E", phi, gamma1, eta1, a4, n + 2)

    k00 = _closing([
        _framed(phi, (xi1, psi2_z, eta2_z, gamma1), (a1, psi2_0, a7, eta2_top), size),
        inner,
        _framed(phi, (xi1, psi1, eta2_z, gamma1), (a1, a2, eta2_0, eta2_top), size),
        _framed(phi, (xi1, psi2_z, eta1, gamma1), (a1, psi2_0, psi2_top, a4), size),
    ], den_00, 1.0)
    k44 = _closing([
        inner,
        _framed(phi, (xi2_z, psi1, eta1, gamma2_z), (a5, xi2_0, a3, gamma2_0), size),
        _framed(phi, (xi1, psi1, eta1, gamma2_z), (gamma2_top, a2, a3, gamma2_0), size),
        _framed(phi, (xi2_z, psi1, eta1, gamma1), (xi2_top, xi2_0, a3, a4), size),
    ], den_44, 1.0)
    k04 = _closing([
        _framed(phi, (xi1, psi1, eta2_z, gamma1), (a1, a2, eta2_0, eta2_top), size),
        _framed(phi, (xi1, psi1, eta1, gamma2_z), (gamma2_top, a2, a3, gamma2_0), size),
        _framed(phi, (xi1, psi1, eta2_z, gamma2_z), (gamma2_top, a2, eta2_0, a8), size),
        inner,
    ], den_04, parity)
    k40 = _closing([
        _framed(phi, (xi1, psi2_z, eta1, gamma1), (a1, psi2_0, psi2_top, a4), size),
        _framed(phi, (xi2_z, psi1, eta1, gamma1), (xi2_top, xi2_0, a3, a4), size),
        inner,
        _framed(phi, (xi2_z, psi2_z, eta1, gamma1), (xi2_top, a6, psi2_top, a4), size),
    ], den_40, parity)

    direct = {
        "K{0;0}": main.rhs[0],
        "K{n+4;n+4}": main.rhs[1],
        "K{0;n+4}": main.rhs[2],
        "K{n+4;0}": main.rhs[3],
    }
    closed = {"K{0;0}": k00, "K{n+4;n+4}": k44, "K{0;n+4}": k04, "K{n+4;0}": k40}
    checks: Dict[str, float] = {}
    degenerate = inner.is_zero
    for name, value in closed.items():
        if value is None:
            degenerate = True
            continue
        checks[f"closing {name}"] = relative_difference(value, direct[name])

    semi_agreement = _minor_agreement(matrix, {
        ((0, last - 1, last), (0, last - 1, last)): den_00,
        ((0, 1, last), (0, 1, last)): den_44,
        ((0, last - 1, last), (0, 1, last)): den_04 if parity > 0 else -den_04,
        ((0, 1, last), (0, last - 1, last)): den_40 if parity > 0 else -den_40,
    })
    checks["semi-framed minors"] = semi_agreement
    checks["framed minor"] = relative_difference(inner, main.lhs[1])

    if not degenerate:
        chain = log_combination([(1.0, k00 * k44), (-1.0, k04 * k40)]) / inner
        checks["chain"] = relative_difference(chain, main.lhs[0])

    constituents = {"K": main.lhs[0], "M[xi1,psi1,eta1,gamma1]": inner}
    constituents.update(direct)
    return DciReport(
        identity="two-framed-K",
        n=n,
        lhs=main.lhs,
        rhs=main.rhs,
        residual=main.residual,
        constituents=constituents,
        checks=checks,
        degenerate=degenerate,
    )
