"""
Tests for structured matrix construction and log-determinants.
"""

import io
import itertools
import math
import time

import numpy as np
import pytest

from toeplitz_framework.core.exceptions import MatrixIndexError, ShapeError, SpecError
from toeplitz_framework.structmat import (
    DetKind,
    StructuredDetSpec,
    bordered_det,
    build_matrix,
    det_log,
    entanglement_block,
    entanglement_block_semiframed,
    export_matrix_csv,
    framed_spec,
    load_matrix_csv,
    minor_det,
    semiframed_det,
    toeplitz_det,
)
from toeplitz_framework.symbols import jump_symbol, polynomial_symbol, rational_symbol
from toeplitz_framework.szego import predict_pure


def laplace_det(matrix):
    """Cofactor expansion along the first row."""
    n = matrix.shape[0]
    if n == 1:
        return matrix[0, 0]
    total = 0j
    for k in range(n):
        sub = np.delete(matrix[1:], k, axis=1)
        total += (-1) ** k * matrix[0, k] * laplace_det(sub)
    return total


def test_det_log_identity():
    value = det_log(np.eye(3))
    assert value.log_modulus == pytest.approx(0.0)
    assert value.phase == pytest.approx(0.0)


def test_det_log_permutation_phase():
    value = det_log(np.array([[0.0, 1.0], [1.0, 0.0]]))
    assert value.log_modulus == pytest.approx(0.0)
    assert value.phase == pytest.approx(math.pi)
    assert value.to_complex() == pytest.approx(-1.0)


def test_det_log_matches_laplace():
    rng = np.random.default_rng(7)
    matrix = rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5))
    expected = laplace_det(matrix)
    assert abs(det_log(matrix).to_complex() - expected) < 1e-12 * abs(expected)


def test_det_log_singular_and_shape():
    assert det_log(np.ones((3, 3))).is_zero
    with pytest.raises(ShapeError):
        det_log(np.ones((2, 3)))
    assert det_log(np.zeros((0, 0))).to_complex() == 1


def test_det_log_no_overflow():
    value = det_log(1e3 * np.eye(400))
    assert value.log_modulus == pytest.approx(400 * math.log(1e3))


def test_minor_det():
    assert minor_det(np.eye(3), [0], [0]).to_complex() == pytest.approx(1.0)
    rng = np.random.default_rng(3)
    matrix = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    expected = np.linalg.det(np.delete(np.delete(matrix, 1, axis=0), 2, axis=1))
    assert minor_det(matrix, [1], [2]).to_complex() == pytest.approx(expected, rel=1e-12)
    with pytest.raises(MatrixIndexError):
        minor_det(matrix, [2, 1], [0, 1])
    with pytest.raises(MatrixIndexError):
        minor_det(matrix, [1], [0, 1])


def test_pure_determinant_at_512(exp_phi):
    start = time.perf_counter()
    value = toeplitz_det(exp_phi, 512)
    elapsed = time.perf_counter() - start
    assert elapsed < 1.0
    # G = 1, E = exp(0.09)
    assert (value / predict_pure(exp_phi, 512)).to_complex() == pytest.approx(1.0, rel=1e-10)
    assert value.log_modulus == pytest.approx(0.09, rel=1e-10)


def test_pure_size_one(exp_phi):
    matrix = build_matrix(StructuredDetSpec(DetKind.PURE, 1, exp_phi))
    assert matrix.shape == (1, 1)
    assert matrix[0, 0] == pytest.approx(exp_phi.coeff(0))


def test_tridiagonal_determinant_closed_form(tridiagonal_phi):
    for n in (1, 5, 20):
        expected = (4.0 / 3.0) * (1.0 - 4.0 ** (-(n + 1)))
        assert toeplitz_det(tridiagonal_phi, n).to_complex() == pytest.approx(expected, rel=1e-12)


def test_semiframed_layout(one):
    psi = polynomial_symbol([2.0, 3.0])
    eta = polynomial_symbol([5.0, 7.0])
    spec = StructuredDetSpec(DetKind.SEMI_H, 3, one, (psi, eta), (11.0,))
    expected = np.array([[1, 0, 2], [0, 1, 3], [7, 5, 11]], dtype=complex)
    np.testing.assert_allclose(build_matrix(spec), expected)
    # H with phi = 1, size 2: a - (eta_0 psi_0)
    value = semiframed_det("H", one, psi, eta, 11.0, 2).to_complex()
    assert value == pytest.approx(11.0 - 5.0 * 2.0)


def test_semiframed_h_trivial_bulk(one):
    psi = polynomial_symbol([2.0, 3.0])
    eta = polynomial_symbol([5.0, 7.0])
    # size n+2 = 3: a - (eta_1 psi_0 + eta_0 psi_1)
    value = semiframed_det("H", one, psi, eta, 11.0, 3).to_complex()
    assert value == pytest.approx(11.0 - (7.0 * 2.0 + 5.0 * 3.0))


def test_bordered_with_equal_columns_vanishes(exp_phi):
    psi = rational_symbol(poles=[(2.0, 1.0)])
    other = rational_symbol(poles=[(3.0, 1.0)])
    scale = abs(bordered_det(exp_phi, (psi, other), 6).to_complex())
    assert abs(bordered_det(exp_phi, (psi, psi), 6).to_complex()) < 1e-12 * scale


def test_bordered_with_bulk_is_pure(exp_phi):
    direct = toeplitz_det(exp_phi, 7)
    assert bordered_det(exp_phi, exp_phi, 7).to_complex() == pytest.approx(direct.to_complex(), rel=1e-12)


def test_framed_m_layout(exp_phi):
    xi, psi, eta, gamma = (polynomial_symbol([k + 1.0, k + 2.0, k + 3.0]) for k in range(4))
    corners = (1.0, 2.0, 3.0, 4.0)
    n = 1
    matrix = build_matrix(framed_spec("M", exp_phi, xi, psi, eta, gamma, corners, n + 3))
    # first row: a1, xi_n .. xi_0, a2
    np.testing.assert_allclose(matrix[0], [1.0, xi.coeff(1), xi.coeff(0), 2.0])
    np.testing.assert_allclose(matrix[-1], [4.0, eta.coeff(1), eta.coeff(0), 3.0])
    np.testing.assert_allclose(matrix[1:-1, 0], [gamma.coeff(1), gamma.coeff(0)])
    np.testing.assert_allclose(matrix[1:-1, -1], [psi.coeff(0), psi.coeff(1)])


@pytest.mark.parametrize("kind, size, borders, corners", [
    (DetKind.BORDERED, 1, 1, 0),
    (DetKind.SEMI_H, 1, 2, 1),
    (DetKind.FRAMED_M, 2, 4, 4),
    (DetKind.TWO_FRAMED_K, 4, 8, 8),
    (DetKind.FRAMED_N, 5, 3, 4),
])
def test_spec_validation(exp_phi, kind, size, borders, corners):
    with pytest.raises(SpecError):
        StructuredDetSpec(kind, size, exp_phi, (exp_phi,) * borders, (1.0,) * corners)


def test_entanglement_block_closed_form():
    # k = 1, i = j = m = n = 1: -det [[g_-2, g_-1], [g_-1, g_0]] = (2/pi)^2
    assert entanglement_block(1, 1, 1, 1, 1) == pytest.approx(4.0 / math.pi ** 2)


def test_entanglement_semiframed_forms_agree():
    for m, n, k in [(2, 2, 2), (3, 2, 3)]:
        for i, j in itertools.product(range(1, m + 1), range(1, n + 1)):
            block = entanglement_block(m, n, k, i, j)
            h_form = entanglement_block_semiframed(m, n, k, i, j, "H")
            l_form = entanglement_block_semiframed(m, n, k, i, j, "L")
            assert abs(h_form - l_form) < 1e-12
            assert abs(block - h_form) < 1e-12


def test_jump_symbol_toeplitz_nonzero():
    g = jump_symbol(0.5)
    for n in range(1, 7):
        assert not toeplitz_det(g, n).is_zero


def test_matrix_csv_roundtrip(exp_phi):
    matrix = build_matrix(StructuredDetSpec(DetKind.PURE, 4, exp_phi)) * (1 + 0.5j)
    buffer = io.StringIO()
    export_matrix_csv(matrix, buffer)
    buffer.seek(0)
    np.testing.assert_array_equal(load_matrix_csv(buffer), matrix)
