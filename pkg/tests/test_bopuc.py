"""
Tests for bi-orthogonal polynomials, the reproducing kernel and the
kernel route to semi-framed determinants.
"""

import numpy as np
import pytest

from toeplitz_framework.bopuc import (
    biorthogonality_residual,
    compute_bopuc,
    determinantal_polynomials,
    h_form_frames,
    kernel_det_identity,
    lu_factorization_residual,
    recurrence_residuals,
    reproducing_kernel,
    semiframed_via_kernel,
)
from toeplitz_framework.core.exceptions import DegenerateMomentError, ParameterError, RangeError
from toeplitz_framework.structmat import semiframed_det
from toeplitz_framework.symbols import constant_symbol, jump_symbol, rational_symbol


def test_trivial_symbol_gives_monomials(one):
    system = compute_bopuc(one, 6)
    np.testing.assert_allclose(system.monic_q, np.eye(7), atol=1e-15)
    np.testing.assert_allclose(system.monic_qhat, np.eye(7), atol=1e-15)
    np.testing.assert_allclose(system.kappa_sq, np.ones(7))
    assert system.q(4, 0.5) == pytest.approx(0.5 ** 4)


def test_kappa_matches_determinant_ratio(exp_phi):
    system = compute_bopuc(exp_phi, 10)
    for n in range(11):
        assert system.kappa_sq[n] == pytest.approx(system.dets_ratio(n), rel=1e-11)


def test_degree_range_checked(exp_phi):
    system = compute_bopuc(exp_phi, 3)
    with pytest.raises(RangeError):
        system.q(4, 0.1)
    with pytest.raises(RangeError):
        compute_bopuc(exp_phi, -1)


def test_vanishing_moment_detected():
    with pytest.raises(DegenerateMomentError) as info:
        compute_bopuc(constant_symbol(0.0), 2)
    assert info.value.k == 1


def test_determinantal_formulas_agree(exp_phi):
    system = compute_bopuc(exp_phi, 5)
    z = 0.7 + 0.2j
    q, q_hat = determinantal_polynomials(exp_phi, 5, z)
    assert q == pytest.approx(system.q(5, z), rel=1e-11)
    assert q_hat == pytest.approx(system.qhat(5, z), rel=1e-11)


@pytest.mark.parametrize("method", ["quadrature", "coefficients"])
def test_biorthogonality(exp_phi, method):
    system = compute_bopuc(exp_phi, 12)
    assert biorthogonality_residual(system, method=method) < 1e-8


def test_biorthogonality_unknown_method(exp_phi):
    with pytest.raises(ParameterError):
        biorthogonality_residual(compute_bopuc(exp_phi, 2), method="guess")


def test_recurrences(exp_phi):
    system = compute_bopuc(exp_phi, 9)
    for n in (0, 4, 8):
        for z in (0.6 + 0.3j, -1.5 + 0.2j):
            assert recurrence_residuals(system, n, z).max < 1e-8
    at_origin = recurrence_residuals(system, 3, 0.0)
    assert at_origin.a is None and at_origin.d < 1e-10


def test_kernel_trivial_symbol(one):
    system = compute_bopuc(one, 6)
    z, zeta = 0.5, 0.8j
    expected = sum((z * zeta) ** j for j in range(6))
    value = reproducing_kernel(system, 5, z, zeta)
    assert value.value == pytest.approx(expected)
    assert value.cd_value == pytest.approx(expected)


def test_kernel_christoffel_darboux(exp_phi):
    system = compute_bopuc(exp_phi, 9)
    assert reproducing_kernel(system, 8, 0.5, 0.8j).discrepancy < 1e-10
    # confluent diagonal z * zeta = 1
    w = 0.8 + 0.4j
    assert reproducing_kernel(system, 8, 1.0 / w, w).discrepancy < 1e-9
    # no Christoffel-Darboux value without degree n+1
    assert reproducing_kernel(system, 9, 0.5, 0.8j).discrepancy is None


def test_kernel_determinant_identity(exp_phi, one):
    assert kernel_det_identity(exp_phi, 6, 0.3, -0.4, 2.5) < 1e-9
    assert kernel_det_identity(one, 2, 0.3, -0.4, 0.0) < 1e-12


def test_lu_factorization(exp_phi, one):
    assert lu_factorization_residual(one, 5) == pytest.approx(0.0, abs=1e-15)
    assert lu_factorization_residual(exp_phi, 10) < 1e-9
    assert lu_factorization_residual(jump_symbol(0.5), 6) < 1e-8


@pytest.mark.parametrize("variant", ["H", "E", "G", "L"])
def test_h_form_frames(exp_phi, rational_frames, variant):
    psi, eta = rational_frames
    size = 7
    psi_h, eta_h = h_form_frames(variant, psi, eta, size)
    direct = semiframed_det(variant, exp_phi, psi, eta, 1.5, size).to_complex()
    rewritten = semiframed_det("H", exp_phi, psi_h, eta_h, 1.5, size).to_complex()
    assert rewritten == pytest.approx(direct, rel=1e-10)


@pytest.mark.parametrize("variant", ["H", "E", "G", "L"])
def test_semiframed_via_kernel_quadrature(exp_phi, rational_frames, variant):
    psi, eta = rational_frames
    value = semiframed_via_kernel(exp_phi, psi, eta, 1.5, 8, variant=variant)
    assert value.method == "quadrature"
    assert value.nodes >= 512
    assert value.residual < 1e-6


@pytest.mark.parametrize("variant", ["H", "L"])
def test_semiframed_via_kernel_coefficients(rational_frames, variant):
    psi, eta = rational_frames
    value = semiframed_via_kernel(jump_symbol(0.5), psi, eta, 1.5, 6, variant=variant, method="coefficients")
    assert value.residual < 1e-9
    record = value.to_record()
    assert record["method"] == "coefficients" and record["n"] == 6


def test_semiframed_via_kernel_trivial_bulk(one):
    psi = rational_symbol(poles=[(2.0, 1.0)])
    eta = rational_symbol(poles=[(-2.0, 1.0)])
    value = semiframed_via_kernel(one, psi, eta, 0.0, 4, method="coefficients")
    # phi = 1: F/D = a - sum_k eta_{n-k} psi_k
    n = 4
    expected = -sum(eta.coeff(n - k) * psi.coeff(k) for k in range(n + 1))
    assert value.value == pytest.approx(expected, rel=1e-12)


def test_semiframed_variant_rejected(exp_phi, rational_frames):
    with pytest.raises(ParameterError):
        semiframed_via_kernel(exp_phi, *rational_frames, 1.0, 3, variant="Q")
