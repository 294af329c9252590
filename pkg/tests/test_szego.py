"""
Tests for border parameters and the strong Szegő constants.
"""

import math

import pytest

from toeplitz_framework.core.exceptions import (
    ConditionalFormulaWarning,
    ParameterError,
    PoleOnCircleError,
    UnsupportedSpecError,
)
from toeplitz_framework.structmat import bordered_det, semiframed_det, toeplitz_det
from toeplitz_framework.symbols import exp_symbol, product_symbol, rational_symbol
from toeplitz_framework.szego import (
    BorderSpec,
    constant_F,
    constant_F_general,
    constant_H,
    constant_J1,
    decay_note,
    predict_bordered_zl,
    predict_pure,
    predict_semiframed,
    predict_zphi_bordered_ratio,
    prediction,
)


def normalized(value, phi, n):
    return (value / predict_pure(phi, n)).to_complex()


def test_constant_F_basic_borders():
    phi = exp_symbol({0: 0.2, 1: 0.3, -1: 0.1})
    assert constant_F(phi, BorderSpec(a0=1.0)) == pytest.approx(1.0)
    assert constant_F(phi, BorderSpec(ahat0=1.0)) == pytest.approx(math.exp(-0.2), rel=1e-12)


def test_constant_F_matches_general_form(exp_phi, border_one, border_two):
    for spec in (border_one, border_two):
        general = constant_F_general(exp_phi, spec.to_symbol(exp_phi))
        assert general == pytest.approx(constant_F(exp_phi, spec), rel=1e-8)


def test_constant_H_basic_borders(exp_phi):
    assert constant_H(exp_phi, BorderSpec(a1=1.0)) == pytest.approx(1.0)
    assert constant_H(exp_phi, BorderSpec(a0=1.0)) == pytest.approx(0.3, rel=1e-12)


def test_constant_H_divisors_agree(exp_phi, border_one):
    by_alpha = constant_H(exp_phi, border_one)
    assert constant_H(exp_phi, border_one, normalize_by="G") == pytest.approx(by_alpha, rel=1e-10)
    with pytest.raises(ParameterError):
        constant_H(exp_phi, border_one, normalize_by="median")


def test_j1_vanishes_for_equal_borders(exp_phi, border_one):
    assert constant_J1(exp_phi, border_one, border_one) == 0


def test_pure_limit(exp_phi):
    n = 40
    assert normalized(toeplitz_det(exp_phi, n), exp_phi, n) == pytest.approx(1.0, rel=1e-8)
    with pytest.raises(ParameterError):
        predict_pure(exp_phi, -1)


def test_bordered_limit(exp_phi, border_one, border_two):
    n = 40
    for spec in (border_one, border_two):
        value = normalized(bordered_det(exp_phi, spec.to_symbol(exp_phi), n), exp_phi, n)
        assert value == pytest.approx(constant_F(exp_phi, spec), rel=1e-4)


def test_two_bordered_limit(exp_phi, border_one, border_two):
    n = 40
    borders = (border_one.to_symbol(exp_phi), border_two.to_symbol(exp_phi))
    value = normalized(bordered_det(exp_phi, borders, n), exp_phi, n)
    assert value == pytest.approx(constant_J1(exp_phi, border_one, border_two), rel=1e-4)


def test_z_inverse_bordered_limit(exp_phi, border_one):
    n = 40
    value = normalized(bordered_det(exp_phi, border_one.to_symbol(exp_phi).shift(-1), n), exp_phi, n)
    assert value == pytest.approx(constant_H(exp_phi, border_one), rel=1e-4)


def test_bordered_z_ell_limit(exp_phi):
    n = 20
    value = (bordered_det(exp_phi, exp_phi.shift(-2), n + 1) / toeplitz_det(exp_phi, n)).to_complex()
    assert predict_bordered_zl(exp_phi, 2) == pytest.approx(0.045, rel=1e-12)
    assert value == pytest.approx(0.045, rel=1e-8)


@pytest.mark.parametrize("variant", ["H", "L"])
def test_semiframed_h_and_l_tend_to_corner(exp_phi, rational_frames, variant):
    psi, eta = rational_frames
    n = 30
    assert predict_semiframed(exp_phi, psi, eta, 1.5, variant) == 1.5
    value = normalized(semiframed_det(variant, exp_phi, psi, eta, 1.5, n + 1), exp_phi, n)
    assert value == pytest.approx(1.5, rel=1e-4)


def test_semiframed_e_outside_poles(exp_phi):
    psi = rational_symbol(poles=[(3.0, 1.0)])
    eta = rational_symbol(poles=[(3.0, 1.0)])
    # a + alpha(3) / alpha(1/3) / (1 - 9)
    expected = 2.0 + math.exp(-0.2) / (1.0 - 9.0)
    assert predict_semiframed(exp_phi, psi, eta, 2.0, "E") == pytest.approx(expected, rel=1e-12)
    n = 30
    value = normalized(semiframed_det("E", exp_phi, psi, eta, 2.0, n + 1), exp_phi, n)
    assert value == pytest.approx(expected, rel=1e-4)


def test_semiframed_e_inside_pole_drops_out(exp_phi):
    psi = rational_symbol(poles=[(3.0, 1.0)])
    eta = rational_symbol(poles=[(0.5, 1.0)])
    assert predict_semiframed(exp_phi, psi, eta, 2.0, "E") == pytest.approx(2.0)


def test_semiframed_g_reflects_bulk():
    phi = exp_symbol({1: 0.2, -1: 0.5})
    psi = rational_symbol(poles=[(3.0, 1.0)])
    eta = rational_symbol(poles=[(2.5, 0.5)])
    assert predict_semiframed(phi, psi, eta, 1.0, "G") == pytest.approx(
        predict_semiframed(phi.reflect(), psi, eta, 1.0, "E"), rel=1e-12
    )


def test_semiframed_multiplied_frames_trivial_bulk(one):
    d, c = 3.0, 2.0
    psi = product_symbol([(d, 1.0)], one, reflected=True)
    eta = product_symbol([(c, 0.5)], one)
    expected = 1.0 + 0.5 / (1.0 - c * d)
    assert predict_semiframed(one, psi, eta, 1.0, "E") == pytest.approx(expected, rel=1e-10)
    rational = predict_semiframed(one, rational_symbol(poles=[(d, 1.0)]), rational_symbol(poles=[(c, 0.5)]), 1.0, "E")
    assert rational == pytest.approx(expected, rel=1e-12)
    direct = semiframed_det("E", one, psi, eta, 1.0, 25).to_complex()
    assert direct == pytest.approx(expected, rel=1e-8)


@pytest.fixture(scope="module")
def skew_phi():
    return exp_symbol({1: 0.3, -1: 0.2, 2: 0.1})


@pytest.mark.parametrize("variant", ["E", "G"])
@pytest.mark.parametrize("d, c", [(0.4, 0.3), (3.0, 2.0), (0.4, 2.0), (2.5, 0.3)])
def test_semiframed_multiplied_frames_match_determinant(skew_phi, variant, d, c):
    reflect_psi = variant == "E"
    psi = product_symbol([(d, 1.0)], skew_phi, reflected=reflect_psi)
    eta = product_symbol([(c, 0.5)], skew_phi, reflected=not reflect_psi)
    n = 40
    expected = predict_semiframed(skew_phi, psi, eta, 1.5, variant)
    value = normalized(semiframed_det(variant, skew_phi, psi, eta, 1.5, n + 1), skew_phi, n)
    assert value == pytest.approx(expected, rel=1e-8)
    if abs(c) > 1 and abs(d) > 1:
        # no inside pair, yet the zeroth-coefficient term moves the constant off a
        assert expected != pytest.approx(1.5, rel=1e-6)


@pytest.mark.parametrize("variant", ["E", "G"])
def test_semiframed_constant_switches_as_pole_crosses_circle(skew_phi, variant):
    psi = rational_symbol(poles=[(3.0, 1.0)])
    n = 40
    predicted = {}
    for c in (3.0, 0.5):
        eta = rational_symbol(poles=[(c, 0.5)])
        predicted[c] = predict_semiframed(skew_phi, psi, eta, 2.0, variant)
        value = normalized(semiframed_det(variant, skew_phi, psi, eta, 2.0, n + 1), skew_phi, n)
        assert value == pytest.approx(predicted[c], rel=1e-4)
    assert predicted[0.5] == pytest.approx(2.0)
    assert predicted[3.0] != pytest.approx(2.0, rel=1e-3)


def test_semiframed_unsupported_frames(exp_phi, rational_frames):
    psi, eta = rational_frames
    with pytest.raises(UnsupportedSpecError):
        predict_semiframed(exp_phi, exp_phi, eta, 1.0, "H")
    with pytest.raises(UnsupportedSpecError):
        predict_semiframed(exp_phi, rational_symbol(1.0, poles=[(2.0, 1.0)]), eta, 1.0, "H")
    with pytest.raises(UnsupportedSpecError):
        predict_semiframed(exp_phi, psi, product_symbol([(2.0, 1.0)], exp_phi), 1.0, "H")
    with pytest.raises(ParameterError):
        predict_semiframed(exp_phi, psi, eta, 1.0, "K")


def test_zphi_bordered_ratio(tridiagonal_phi, border_one):
    n = 20
    zphi = tridiagonal_phi.shift(1)
    value = (bordered_det(zphi, border_one.to_symbol(tridiagonal_phi), n + 1) / toeplitz_det(zphi, n)).to_complex()
    assert value == pytest.approx(predict_zphi_bordered_ratio(tridiagonal_phi, border_one, n), rel=1e-4)


def test_zphi_prediction_for_trivial_symbol(one, border_one):
    with pytest.warns(ConditionalFormulaWarning):
        value = predict_zphi_bordered_ratio(one, border_one, 4)
    assert value == pytest.approx(constant_F(one, border_one))
    with pytest.raises(ParameterError):
        predict_zphi_bordered_ratio(one, border_one, 0)


def test_decay_note_and_prediction(exp_phi, tridiagonal_phi):
    assert decay_note(exp_phi) == "O(rho^-n) for every rho > 1"
    assert decay_note(exp_phi, [2.0, 0.5]) == "O(rho^-n) for 1 < rho < 2"
    assert decay_note(tridiagonal_phi).startswith("O(rho^-n) for 1 < rho < ")
    assert prediction(exp_phi, 10, 0.0).value.is_zero
    record = prediction(exp_phi, 10, 2.0).to_dict()
    assert record["constant"] == [2.0, 0.0]


@pytest.mark.parametrize("params, error", [
    ({"poles": [1.0], "b": [1.0], "b_hat": [0.0]}, PoleOnCircleError),
    ({"poles": [0.0], "b": [1.0], "b_hat": [0.0]}, ParameterError),
    ({"poles": [2.0], "b": [1.0, 2.0]}, ParameterError),
    ({"a2": 1.0}, ParameterError),
])
def test_border_spec_validation(params, error):
    with pytest.raises(error):
        BorderSpec.from_params(params)


def test_border_spec_params_roundtrip(border_one):
    assert BorderSpec.from_params(border_one.to_params()) == border_one
    assert border_one.scale(2.0).a0 == pytest.approx(2.0)
