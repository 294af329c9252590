"""
Tests for symbols, Fourier coefficients and log-symbol data.
"""

import math

import numpy as np
import pytest
from scipy.special import iv

from toeplitz_framework.core.exceptions import ParameterError, PoleOnCircleError, WindingError
from toeplitz_framework.symbols import (
    SymbolKind,
    alpha_taylor_at_zero,
    constant_symbol,
    eval_alpha,
    exp_symbol,
    fourier_coeffs,
    ising_symbol,
    jump_symbol,
    make_family,
    polynomial_symbol,
    rational_symbol,
    szego_data,
    winding_number,
)


def test_pole_coefficients_outside_disk():
    symbol = rational_symbol(poles=[(2.0, 1.0)])
    series = fourier_coeffs(symbol, 0, 3)
    np.testing.assert_allclose(series.coeffs, [-0.5, -0.25, -0.125, -0.0625])
    assert series[-1] == 0


def test_constant_coefficients(one):
    np.testing.assert_allclose(fourier_coeffs(one, -2, 2).coeffs, [0, 0, 1, 0, 0])


def test_exp_coefficients_match_bessel(exp_phi):
    # [exp(t(z + 1/z))]_j = I_j(2t)
    series = fourier_coeffs(exp_phi, -3, 3)
    expected = [iv(abs(j), 0.6) for j in range(-3, 4)]
    np.testing.assert_allclose(series.coeffs, expected, rtol=1e-12, atol=1e-15)
    zeroth = sum(0.3 ** (2 * m) / math.factorial(m) ** 2 for m in range(30))
    assert series[0] == pytest.approx(zeroth, rel=1e-13)


def test_jump_coefficients():
    g = jump_symbol()
    coeffs = g.coefficients_at(np.arange(-3, 4))
    expected = [-2 / (3 * np.pi), 0, 2 / np.pi, 0, 2 / np.pi, 0, -2 / (3 * np.pi)]
    np.testing.assert_allclose(coeffs, expected, atol=1e-15)
    assert g.kind is SymbolKind.JUMP


def test_winding_numbers(one, exp_phi):
    assert winding_number(one) == 0
    assert winding_number(exp_phi.shift(1)) == 1
    assert winding_number(polynomial_symbol([-2.0, 1.0])) == 0
    assert winding_number(polynomial_symbol([-0.5, 1.0])) == 1


def test_szego_data_trivial(one):
    data = szego_data(one)
    assert data.G == pytest.approx(1.0)
    assert data.E == pytest.approx(1.0)
    assert eval_alpha(data, 0.3 + 0.2j) == pytest.approx(1.0)
    assert eval_alpha(data, 2.5) == pytest.approx(1.0)


def test_szego_data_asymmetric_exp():
    data = szego_data(exp_symbol({1: 0.2, -1: 0.5}))
    assert data.G == pytest.approx(1.0, abs=1e-13)
    assert data.E == pytest.approx(math.exp(0.1), rel=1e-12)
    assert eval_alpha(data, 0.0) == pytest.approx(1.0, abs=1e-13)


def test_alpha_inside_is_exp_of_analytic_part(exp_phi):
    data = szego_data(exp_phi)
    assert eval_alpha(data, 0.5) == pytest.approx(math.exp(0.3 * 0.5), rel=1e-12)
    # outside: exp(-sum_{k>=1} [log phi]_{-k} z^{-k})
    assert eval_alpha(data, 2.0) == pytest.approx(math.exp(-0.3 / 2.0), rel=1e-12)


def test_alpha_branches_evaluated_on_their_own_side():
    data = szego_data(ising_symbol(3.0))
    points = np.array([0.5, 0.2j, 5.0, -4.0j])
    with np.errstate(over="raise", invalid="raise"):
        values = eval_alpha(data, points)
    expected = [(1 - z / 3.0) ** -0.5 if abs(z) < 1 else (1 - 1 / (3.0 * z)) ** -0.5 for z in points]
    np.testing.assert_allclose(values, expected, rtol=1e-10)


def test_alpha_taylor_coefficients(exp_phi):
    data = szego_data(exp_phi)
    assert alpha_taylor_at_zero(data, 0) == pytest.approx(data.G)
    assert alpha_taylor_at_zero(data, 1) == pytest.approx(data.G * data.log_coeff(1))
    assert alpha_taylor_at_zero(data, 2) == pytest.approx(0.045, rel=1e-12)


def test_tridiagonal_szego_constants(tridiagonal_phi):
    data = szego_data(tridiagonal_phi)
    assert data.G == pytest.approx(1.0, abs=1e-13)
    assert data.E == pytest.approx(4.0 / 3.0, rel=1e-12)


def test_szego_data_rejects_winding(exp_phi):
    with pytest.raises(WindingError):
        szego_data(exp_phi.shift(1))


def test_ising_symbol_is_unimodular():
    phi = ising_symbol(3.0)
    z = np.exp(1j * np.linspace(0.0, 2.0 * np.pi, 64, endpoint=False))
    np.testing.assert_allclose(np.abs(phi(z)), 1.0, atol=1e-13)
    assert winding_number(phi) == 0


def test_pole_on_circle_rejected():
    with pytest.raises(PoleOnCircleError):
        rational_symbol(poles=[(1.0, 1.0)])


def test_make_family():
    assert make_family("constant", {"value": 1}).coeff(0) == 1
    with pytest.raises(ParameterError):
        make_family("no-such-family")
    with pytest.raises(ParameterError):
        make_family("product", {"poles": [[2.0, 1.0]]})


def test_make_family_rational_combo(exp_phi, border_one):
    psi = make_family("rational-combo", {"a0": 1.0}, bulk=exp_phi)
    np.testing.assert_allclose(psi.coefficients_at(np.arange(-4, 5)), exp_phi.coefficients_at(np.arange(-4, 5)), atol=1e-14)
    assert psi.kind is SymbolKind.RATIONAL_COMBO
    combo = border_one.to_symbol(exp_phi)
    z = 1.3 * np.exp(0.4j)
    expected = (
        (1.0 + 0.5 * z / (z - 2.0) + 0.2 * z / (z - 0.5)) * exp_phi(z)
        + 0.4 + 0.3 / (z - 2.0) - 0.1 / (z - 0.5)
    )
    # evaluation away from the circle exercises the closed form, not the FFT
    assert combo(z) == pytest.approx(expected, rel=1e-12)


def test_shift_and_reflect(exp_phi):
    shifted = exp_phi.shift(2)
    assert shifted.coeff(3) == pytest.approx(exp_phi.coeff(1))
    reflected = rational_symbol(poles=[(2.0, 1.0)]).reflect()
    assert reflected.coeff(-1) == pytest.approx(-0.25)
    assert constant_symbol(2.0).scale(0.5).coeff(0) == pytest.approx(1.0)
