import numpy as np
import pytest
from scipy.special import airy as scipy_airy

from kpz_lab.quadrature import (
    gauss_legendre,
    interval_rule,
    panel_rule,
    semiinfinite_rule,
    circle_rule,
    hairpin_rule,
    complex_det,
)
from oracles import det_cofactor


def test_gauss_legendre_polynomial_exactness():
    n = 12
    x, w = gauss_legendre(n)
    assert abs(np.sum(w) - 2.0) < 1e-14
    rng = np.random.default_rng(7)
    coeffs = rng.standard_normal(2 * n)  # degree 2n-1
    vals = np.polynomial.polynomial.polyval(x, coeffs)
    exact = sum(c * ((1.0 ** (k + 1) - (-1.0) ** (k + 1)) / (k + 1))
                for k, c in enumerate(coeffs))
    assert abs(np.sum(w * vals) - exact) < 1e-13


def test_gauss_legendre_symmetry_and_order():
    for n in (1, 2, 5, 40, 81):
        x, w = gauss_legendre(n)
        assert np.all(np.diff(x) > 0)
        assert np.allclose(x, -x[::-1], atol=1e-15)
        assert np.allclose(w, w[::-1], atol=1e-15)
        assert np.all(w > 0)


def test_gauss_legendre_matches_known_3pt_rule():
    x, w = gauss_legendre(3)
    assert np.allclose(x, [-np.sqrt(0.6), 0.0, np.sqrt(0.6)], atol=1e-15)
    assert np.allclose(w, [5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0], atol=1e-15)


def test_interval_rule():
    x, w = interval_rule(1.0, 3.0, 8)
    assert abs(np.sum(w * x ** 2) - 26.0 / 3.0) < 1e-13


def test_panel_rule_exponential():
    edges = np.arange(0.0, 11.0)
    x, w = panel_rule(edges, 12)
    assert abs(np.sum(w * np.exp(-x)) - (1.0 - np.exp(-10.0))) < 1e-13


def test_panel_rule_rejects_bad_edges():
    with pytest.raises(ValueError):
        panel_rule([0.0, 0.0, 1.0], 4)


def test_semiinfinite_rule_gamma_integral():
    # int_0^inf x^3 e^-x dx = 6
    x, w = semiinfinite_rule(0.0, 80)
    assert abs(np.sum(w * x ** 3 * np.exp(-x)) - 6.0) < 1e-11


def test_semiinfinite_rule_airy_tail():
    # int_0^inf Ai(t) dt = 1/3
    x, w = semiinfinite_rule(0.0, 100)
    val = np.sum(w * scipy_airy(x)[0])
    assert abs(val - 1.0 / 3.0) < 1e-10


def test_semiinfinite_rule_shifted():
    # int_s^inf e^{-(x-s)} dx = 1 for any s
    x, w = semiinfinite_rule(-7.5, 80)
    assert abs(np.sum(w * np.exp(-(x + 7.5))) - 1.0) < 1e-12


def test_circle_rule_residues():
    z, dz = circle_rule(32, radius=0.8)
    for k in range(-3, 4):
        val = np.sum(z ** k * dz) / (2j * np.pi)
        want = 1.0 if k == -1 else 0.0
        assert abs(val - want) < 1e-13
    val = np.sum(np.exp(z) / z * dz) / (2j * np.pi)
    assert abs(val - 1.0) < 1e-13


def test_circle_rule_center():
    z, dz = circle_rule(64, radius=0.5, center=2.0 + 1.0j)
    val = np.sum(dz / (z - (2.0 + 1.0j))) / (2j * np.pi)
    assert abs(val - 1.0) < 1e-13


def test_hairpin_rule_residue_at_zero():
    z, dz = hairpin_rule(x_max=40.0, delta=1.0)
    val = np.sum(np.exp(-z) / z * dz) / (2j * np.pi)
    assert abs(val - 1.0) < 1e-12


def test_hairpin_rule_interior_pole_and_entire_function():
    z, dz = hairpin_rule(x_max=40.0, delta=1.0)
    # pole at mu = 5 lies inside the wrapped region
    val = np.sum(np.exp(-z) / (z - 5.0) * dz) / (2j * np.pi)
    assert abs(val - np.exp(-5.0)) < 1e-12
    # entire integrand: open-contour value is an endpoint difference ~ e^-40
    val2 = np.sum(np.exp(-z) * z * dz)
    assert abs(val2) < 1e-12


def test_complex_det_against_cofactor():
    rng = np.random.default_rng(11)
    a = rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5))
    got = complex_det(a)
    want = det_cofactor(a)
    assert abs(got - want) / abs(want) < 1e-12


def test_complex_det_real_matrix_and_identity():
    rng = np.random.default_rng(4)
    a = rng.standard_normal((6, 6))
    want = det_cofactor(a.astype(complex))
    assert abs(complex_det(a) - want) / abs(want) < 1e-12
    assert complex_det(np.eye(4)) == pytest.approx(1.0)


def test_complex_det_wide_dynamic_range():
    # pivots span ~300 orders of magnitude but the determinant is 2
    d = np.diag([1e-150, 1e150, 2.0]).astype(complex)
    assert abs(complex_det(d) - 2.0) < 1e-12


def test_complex_det_flags_degenerate_pivot():
    a = np.ones((3, 3), dtype=complex)
    with pytest.raises(FloatingPointError):
        complex_det(a)
