"""
Structured Toeplitz matrices and overflow-safe determinants.

Every builder follows its display entry by entry. Orientation table
(row index j, column index k):

    kind                      bulk entry     extra columns / rows
    PURE                      phi_{j-k}      -
    PURE_ROW                  phi_{k-j}      -
    BORDERED, MULTI_BORDERED  phi_{k-j}      border l in column n-m-1+l: psi_{l, n-1-j}
    SEMI_E                    phi_{j-k}      column psi_{N-2-j}, row eta_{N-2-k}
    SEMI_G                    phi_{j-k}      column psi_j,       row eta_k
    SEMI_H                    phi_{j-k}      column psi_j,       row eta_{N-2-k}
    SEMI_L                    phi_{j-k}      column psi_{N-2-j}, row eta_k
    FRAMED_M, MULTI_FRAMED    phi_{j-k}      per ring: top xi reversed, right psi
                                             increasing, bottom eta reversed,
                                             left gamma reversed
    FRAMED_N                  phi_{j-k}      top xi increasing, right psi reversed,
                                             left gamma increasing, bottom eta reversed

Pure and transposed orientations give the same determinant; minor index
bookkeeping follows the displayed orientation.
"""

import csv
import logging
import math
import warnings
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, List, Optional, Sequence, TextIO, Tuple, Union

import numpy as np
import scipy.linalg

from toeplitz_framework.core.exceptions import MatrixIndexError, ShapeError, SpecError
from toeplitz_framework.core.logcomplex import LogComplex
from toeplitz_framework.symbols import Symbol, jump_symbol

logger = logging.getLogger(__name__)

PIVOT_ZERO_THRESHOLD = 1e-30


class DetKind(Enum):
    PURE = "pure"
    PURE_ROW = "pure-row"
    BORDERED = "bordered"
    MULTI_BORDERED = "multi-bordered"
    SEMI_E = "semi-framed-E"
    SEMI_G = "semi-framed-G"
    SEMI_H = "semi-framed-H"
    SEMI_L = "semi-framed-L"
    FRAMED_M = "framed-M"
    FRAMED_N = "framed-N"
    TWO_FRAMED_K = "two-framed-K"
    MULTI_FRAMED = "multi-framed"
    ENTANGLEMENT = "entanglement-block"


SEMI_FRAMED_KINDS = {
    "E": DetKind.SEMI_E,
    "G": DetKind.SEMI_G,
    "H": DetKind.SEMI_H,
    "L": DetKind.SEMI_L,
}


@dataclass(frozen=True)
class StructuredDetSpec:
    """
    Declarative description of one structured determinant.

    ``size`` is always the matrix dimension. ``frames`` is m for
    MULTI_BORDERED and MULTI_FRAMED. Framed kinds take borders in the order
    (xi, psi, eta, gamma) per frame, innermost frame first, and corners
    a_1..a_{4m} as (top-left, top-right, bottom-right, bottom-left) per frame.
    Semi-framed kinds take borders (psi, eta) and a single corner a.
    ENTANGLEMENT takes ``block`` = (m, n, k, i, j) and no symbols.
    """

    kind: DetKind
    size: int
    bulk: Optional[Symbol] = None
    borders: Tuple[Symbol, ...] = ()
    corners: Tuple[complex, ...] = ()
    frames: int = 1
    block: Optional[Tuple[int, int, int, int, int]] = None

    def __post_init__(self):
        object.__setattr__(self, "borders", tuple(self.borders))
        object.__setattr__(self, "corners", tuple(complex(a) for a in self.corners))
        kind, n = self.kind, self.size
        if kind is DetKind.ENTANGLEMENT:
            if self.block is None:
                raise SpecError("entanglement block needs (m, n, k, i, j)")
            m, n_sites, k, i, j = self.block
            if k < 1 or not (1 <= i <= m) or not (1 <= j <= n_sites):
                raise SpecError(f"entanglement block indices out of range: {self.block}")
            object.__setattr__(self, "size", k + 1)
            return
        if self.bulk is None:
            raise SpecError(f"{kind.value} needs a bulk symbol")
        borders, corners = len(self.borders), len(self.corners)
        if kind in (DetKind.PURE, DetKind.PURE_ROW):
            self._require(n >= 0, "size must be non-negative")
            self._require(borders == 0 and corners == 0, "pure determinants take no borders or corners")
        elif kind is DetKind.BORDERED:
            self._require(n >= 2, "bordered size must be at least 2")
            self._require(borders == 1 and corners == 0, "bordered determinants take one border")
        elif kind is DetKind.MULTI_BORDERED:
            m = self.frames
            self._require(m >= 1, "multi-bordered needs at least one border")
            self._require(n >= m + 1, f"{m}-bordered size must be at least {m + 1}")
            self._require(borders == m and corners == 0, f"{m}-bordered determinants take {m} borders")
        elif kind in SEMI_FRAMED_KINDS.values():
            self._require(n >= 2, "semi-framed size must be at least 2")
            self._require(borders == 2 and corners == 1, "semi-framed determinants take (psi, eta) and one corner")
        elif kind in (DetKind.FRAMED_M, DetKind.FRAMED_N):
            self._require(n >= 3, "framed size must be at least 3")
            self._require(borders == 4 and corners == 4, "framed determinants take four borders and four corners")
        elif kind in (DetKind.MULTI_FRAMED, DetKind.TWO_FRAMED_K):
            m = 2 if kind is DetKind.TWO_FRAMED_K else self.frames
            object.__setattr__(self, "frames", m)
            self._require(m >= 1, "multi-framed needs at least one frame")
            self._require(n >= 2 * m + 1, f"{m}-framed size must be at least {2 * m + 1}")
            self._require(borders == 4 * m and corners == 4 * m, f"{m}-framed determinants take {4 * m} borders and corners")

    def _require(self, condition: bool, message: str) -> None:
        if not condition:
            raise SpecError(message, {"kind": self.kind.value, "size": self.size})


def _toeplitz_block(symbol: Symbol, rows: int, cols: int, row_minus_col: bool = True) -> np.ndarray:
    """Block with entries symbol_{j-k} (or symbol_{k-j})."""
    if rows == 0 or cols == 0:
        return np.zeros((rows, cols), dtype=complex)
    j = np.arange(rows)[:, None]
    k = np.arange(cols)[None, :]
    idx = j - k if row_minus_col else k - j
    return symbol.coefficients_at(idx)


def _build_multi_bordered(spec: StructuredDetSpec) -> np.ndarray:
    n, m = spec.size, len(spec.borders)
    matrix = np.empty((n, n), dtype=complex)
    matrix[:, : n - m] = _toeplitz_block(spec.bulk, n, n - m, row_minus_col=False)
    rows = np.arange(n)
    for ell, border in enumerate(spec.borders, start=1):
        matrix[:, n - m - 1 + ell] = border.coefficients_at(n - 1 - rows)
    return matrix


def _build_semi_framed(spec: StructuredDetSpec) -> np.ndarray:
    N = spec.size
    psi, eta = spec.borders
    matrix = np.empty((N, N), dtype=complex)
    matrix[: N - 1, : N - 1] = _toeplitz_block(spec.bulk, N - 1, N - 1)
    idx = np.arange(N - 1)
    if spec.kind in (DetKind.SEMI_E, DetKind.SEMI_L):
        matrix[: N - 1, N - 1] = psi.coefficients_at(N - 2 - idx)
    else:
        matrix[: N - 1, N - 1] = psi.coefficients_at(idx)
    if spec.kind in (DetKind.SEMI_E, DetKind.SEMI_H):
        matrix[N - 1, : N - 1] = eta.coefficients_at(N - 2 - idx)
    else:
        matrix[N - 1, : N - 1] = eta.coefficients_at(idx)
    matrix[N - 1, N - 1] = spec.corners[0]
    return matrix


def _build_multi_framed(spec: StructuredDetSpec) -> np.ndarray:
    N, m = spec.size, spec.frames
    matrix = np.empty((N, N), dtype=complex)
    matrix[m: N - m, m: N - m] = _toeplitz_block(spec.bulk, N - 2 * m, N - 2 * m)
    for s in range(m):
        ell = m - s
        xi, psi, eta, gamma = spec.borders[4 * (ell - 1): 4 * ell]
        a_tl, a_tr, a_br, a_bl = spec.corners[4 * (ell - 1): 4 * ell]
        lo, hi = s, N - 1 - s
        inner = np.arange(lo + 1, hi)
        matrix[lo, inner] = xi.coefficients_at(N - 2 - s - inner)
        matrix[hi, inner] = eta.coefficients_at(N - 2 - s - inner)
        matrix[inner, lo] = gamma.coefficients_at(N - 2 - s - inner)
        matrix[inner, hi] = psi.coefficients_at(inner - 1 - s)
        matrix[lo, lo], matrix[lo, hi], matrix[hi, hi], matrix[hi, lo] = a_tl, a_tr, a_br, a_bl
    return matrix


def _build_framed_n(spec: StructuredDetSpec) -> np.ndarray:
    N = spec.size
    n = N - 3
    xi, psi, eta, gamma = spec.borders
    a1, a2, a3, a4 = spec.corners
    matrix = np.empty((N, N), dtype=complex)
    matrix[1: N - 1, 1: N - 1] = _toeplitz_block(spec.bulk, n + 1, n + 1)
    idx = np.arange(n + 1)
    matrix[0, 1: N - 1] = xi.coefficients_at(idx)
    matrix[1: N - 1, 0] = gamma.coefficients_at(idx)
    matrix[1: N - 1, N - 1] = psi.coefficients_at(n - idx)
    matrix[N - 1, 1: N - 1] = eta.coefficients_at(n - idx)
    matrix[0, 0], matrix[0, N - 1], matrix[N - 1, N - 1], matrix[N - 1, 0] = a1, a2, a3, a4
    return matrix


def _build_entanglement(spec: StructuredDetSpec) -> np.ndarray:
    m, _, k, i, j = spec.block
    g = jump_symbol()
    rows = np.arange(1, k + 1)[:, None]
    cols = np.arange(1, k + 1)[None, :]
    matrix = np.empty((k + 1, k + 1), dtype=complex)
    matrix[0, 0] = g.coeff(i - j - m - k)
    matrix[0, 1:] = g.coefficients_at(i - m - np.arange(1, k + 1))
    matrix[1:, 0] = g.coefficients_at(np.arange(1, k + 1) - j - k)
    matrix[1:, 1:] = g.coefficients_at(rows - cols)
    return matrix


def build_matrix(spec: StructuredDetSpec) -> np.ndarray:
    """Dense complex matrix for a structured determinant spec."""
    kind = spec.kind
    if kind is DetKind.PURE:
        return _toeplitz_block(spec.bulk, spec.size, spec.size)
    if kind is DetKind.PURE_ROW:
        return _toeplitz_block(spec.bulk, spec.size, spec.size, row_minus_col=False)
    if kind in (DetKind.BORDERED, DetKind.MULTI_BORDERED):
        return _build_multi_bordered(spec)
    if kind in SEMI_FRAMED_KINDS.values():
        return _build_semi_framed(spec)
    if kind in (DetKind.FRAMED_M, DetKind.MULTI_FRAMED, DetKind.TWO_FRAMED_K):
        return _build_multi_framed(spec)
    if kind is DetKind.FRAMED_N:
        return _build_framed_n(spec)
    if kind is DetKind.ENTANGLEMENT:
        return _build_entanglement(spec)
    raise SpecError(f"unsupported determinant kind {kind}")


def det_log(matrix) -> LogComplex:
    """
    Determinant by LU with partial pivoting, accumulated in log form.

    A pivot below 1e-30 times the norm of its (permuted) original row marks
    the determinant as exactly zero.
    """
    a = np.asarray(matrix, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ShapeError(f"determinant of a non-square matrix with shape {a.shape}")
    n = a.shape[0]
    if n == 0:
        return LogComplex.one()
    if not np.all(np.isfinite(a)):
        raise ShapeError("matrix has non-finite entries")

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(a, check_finite=False)

    perm = np.arange(n)
    swaps = 0
    for i, p in enumerate(piv):
        if p != i:
            perm[i], perm[p] = perm[p], perm[i]
            swaps += 1
    row_norms = np.linalg.norm(a[perm], axis=1)
    diag = np.diag(lu)
    moduli = np.abs(diag)
    if np.any(moduli <= PIVOT_ZERO_THRESHOLD * row_norms) or np.any(moduli == 0):
        return LogComplex.zero()

    log_modulus = float(np.sum(np.log(moduli)))
    phase = float(np.sum(np.angle(diag))) + (math.pi if swaps % 2 else 0.0)
    return LogComplex(log_modulus, phase)


def _check_indices(indices: Sequence[int], bound: int, label: str) -> List[int]:
    indices = [int(i) for i in indices]
    for a, b in zip(indices, indices[1:]):
        if b <= a:
            raise MatrixIndexError(f"{label} indices must be strictly increasing: {indices}")
    if indices and (indices[0] < 0 or indices[-1] >= bound):
        raise MatrixIndexError(f"{label} indices out of range [0, {bound}): {indices}")
    return indices


def delete_rows_cols(matrix, removed_rows: Sequence[int], removed_cols: Sequence[int]) -> np.ndarray:
    """Submatrix with the listed rows and columns deleted."""
    a = np.asarray(matrix, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ShapeError(f"minor of a non-square matrix with shape {a.shape}")
    rows = _check_indices(removed_rows, a.shape[0], "row")
    cols = _check_indices(removed_cols, a.shape[1], "column")
    if len(rows) != len(cols):
        raise MatrixIndexError(f"removed {len(rows)} rows but {len(cols)} columns")
    return np.delete(np.delete(a, rows, axis=0), cols, axis=1)


def minor_det(matrix, removed_rows: Sequence[int], removed_cols: Sequence[int]) -> LogComplex:
    """Determinant of the submatrix with those rows and columns removed."""
    return det_log(delete_rows_cols(matrix, removed_rows, removed_cols))


def structured_det(spec: StructuredDetSpec) -> LogComplex:
    return det_log(build_matrix(spec))


# Convenience constructors used across the package


def toeplitz_det(bulk: Symbol, n: int) -> LogComplex:
    """D_n[bulk]; D_0 = 1."""
    return structured_det(StructuredDetSpec(DetKind.PURE, n, bulk))


def bordered_det(bulk: Symbol, borders: Union[Symbol, Sequence[Symbol]], n: int) -> LogComplex:
    """D^B_n[bulk; borders...] with the bordered display orientation."""
    if isinstance(borders, Symbol):
        borders = (borders,)
    borders = tuple(borders)
    kind = DetKind.BORDERED if len(borders) == 1 else DetKind.MULTI_BORDERED
    return structured_det(StructuredDetSpec(kind, n, bulk, borders, frames=len(borders)))


def semiframed_spec(variant: str, bulk: Symbol, psi: Symbol, eta: Symbol, a: complex, size: int) -> StructuredDetSpec:
    try:
        kind = SEMI_FRAMED_KINDS[variant.upper()]
    except KeyError:
        raise SpecError(f"unknown semi-framed variant {variant!r}") from None
    return StructuredDetSpec(kind, size, bulk, (psi, eta), (a,))


def semiframed_det(variant: str, bulk: Symbol, psi: Symbol, eta: Symbol, a: complex, size: int) -> LogComplex:
    """E/G/H/L_size[bulk; psi, eta; a]."""
    return structured_det(semiframed_spec(variant, bulk, psi, eta, a, size))


def framed_spec(
    kind: str,
    bulk: Symbol,
    xi: Symbol,
    psi: Symbol,
    eta: Symbol,
    gamma: Symbol,
    corners: Sequence[complex],
    size: int,
) -> StructuredDetSpec:
    det_kind = {"M": DetKind.FRAMED_M, "N": DetKind.FRAMED_N}.get(kind.upper())
    if det_kind is None:
        raise SpecError(f"unknown framed kind {kind!r}")
    return StructuredDetSpec(det_kind, size, bulk, (xi, psi, eta, gamma), tuple(corners))


def entanglement_block(m: int, n: int, k: int, i: int, j: int) -> complex:
    """The entanglement matrix entry A_ij(k) = -det of the (k+1)x(k+1) block of g."""
    spec = StructuredDetSpec(DetKind.ENTANGLEMENT, k + 1, block=(m, n, k, i, j))
    return -structured_det(spec).to_complex()


def entanglement_block_semiframed(m: int, n: int, k: int, i: int, j: int, variant: str = "H") -> complex:
    """
    The same entry through a semi-framed determinant of g.

    H form: -H_{k+1}[g; g z^{j+k-1}, g z^{m+k-i}; g_{i-j-m-k}].
    L form: -L_{k+1}[g; g~ z^{-j}, g~ z^{i-m-1}; g_{i-j-m-k}].
    """
    if k < 1 or not (1 <= i <= m) or not (1 <= j <= n):
        raise SpecError(f"entanglement block indices out of range: {(m, n, k, i, j)}")
    g = jump_symbol()
    corner = g.coeff(i - j - m - k)
    variant = variant.upper()
    if variant == "H":
        value = semiframed_det("H", g, g.shift(j + k - 1), g.shift(m + k - i), corner, k + 1)
    elif variant == "L":
        g_tilde = g.reflect()
        value = semiframed_det("L", g, g_tilde.shift(-j), g_tilde.shift(i - m - 1), corner, k + 1)
    else:
        raise SpecError(f"entanglement block supports the H and L forms, got {variant!r}")
    return -value.to_complex()


def export_matrix_csv(matrix, stream: TextIO) -> None:
    """Write a matrix row-major with one "re,im" cell per entry."""
    writer = csv.writer(stream)
    for row in np.asarray(matrix, dtype=complex):
        writer.writerow([f"{z.real:.17g},{z.imag:.17g}" for z in row])


def load_matrix_csv(stream: Iterable[str]) -> np.ndarray:
    rows = []
    for row in csv.reader(stream):
        if not row:
            continue
        cells = []
        for cell in row:
            re, im = cell.split(",")
            cells.append(complex(float(re), float(im)))
        rows.append(cells)
    return np.array(rows, dtype=complex)
