import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import special

from goldilocks.specfun import (
    gauss_legendre,
    hyper3F2_terminating,
    laguerre,
    laguerre_derivative,
    log_gamma,
    pochhammer,
)


@pytest.mark.parametrize(
    "x, expected",
    [(1.0, 0.0), (0.5, 0.5723649429247001), (5.0, math.log(24.0))],
)
def test_log_gamma_values(x, expected):
    assert log_gamma(x) == pytest.approx(expected, abs=1e-12)


@pytest.mark.parametrize("x", [0.0, -1.0, -0.5])
def test_log_gamma_domain(x):
    with pytest.raises(ValueError):
        log_gamma(x)


def test_log_gamma_functional_equation():
    for x in np.linspace(0.1, 20.0, 400):
        assert log_gamma(x + 1) == pytest.approx(log_gamma(x) + math.log(x), abs=1e-12)


@settings(max_examples=200, deadline=None)
@given(st.floats(1e-3, 300.0))
def test_log_gamma_against_scipy(x):
    assert log_gamma(x) == pytest.approx(special.gammaln(x), rel=1e-13, abs=1e-13)


def test_laguerre_examples():
    assert laguerre(0, 1.7, 3.2) == 1.0
    assert laguerre(1, 2.5, 1.0) == pytest.approx(2.5, abs=1e-15)
    assert laguerre(2, 0.0, 2.0) == pytest.approx(-1.0, abs=1e-15)


def _laguerre_series(nu, alpha, x):
    # L_nu^alpha(x) = sum_j (-1)^j binom(nu + alpha, nu - j) x^j / j!, in exact rationals
    alpha, x = Fraction(alpha), Fraction(x)
    total = Fraction(0)
    for j in range(nu + 1):
        binom = Fraction(1)
        for i in range(1, nu - j + 1):
            binom *= (alpha + j + i) / i
        total += (-1) ** j * binom * x**j / math.factorial(j)
    return float(total)


@pytest.mark.parametrize("nu", range(9))
@pytest.mark.parametrize("alpha", [0.0, 0.5, 3.0])
@pytest.mark.parametrize("x", [0.1, 1.0, 10.0])
def test_laguerre_matches_series(nu, alpha, x):
    ref = _laguerre_series(nu, alpha, x)
    assert laguerre(nu, alpha, x) == pytest.approx(ref, rel=1e-12)


@settings(max_examples=200, deadline=None)
@given(
    st.integers(0, 12),
    st.floats(-0.9, 6.0),
    st.floats(0.0, 30.0),
)
def test_laguerre_against_scipy(nu, alpha, x):
    ref = special.eval_genlaguerre(nu, alpha, x)
    assert laguerre(nu, alpha, x) == pytest.approx(ref, rel=1e-10, abs=1e-10 * max(1.0, abs(ref)))


def test_laguerre_vectorized():
    x = np.linspace(0.0, 5.0, 7)
    np.testing.assert_allclose(laguerre(3, 1.5, x), [laguerre(3, 1.5, v) for v in x], rtol=1e-15)


def test_laguerre_derivative_examples():
    assert laguerre_derivative(0, 2.0, 1.3) == 0.0
    assert laguerre_derivative(1, 0.0, 3.0) == pytest.approx(-1.0)
    assert laguerre_derivative(2, 1.0, 1.5) == pytest.approx(-1.5)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 8), st.floats(0.0, 4.0), st.floats(0.05, 10.0))
def test_laguerre_derivative_finite_difference(nu, alpha, x):
    h = 1e-6
    fd = (laguerre(nu, alpha, x + h) - laguerre(nu, alpha, x - h)) / (2 * h)
    assert laguerre_derivative(nu, alpha, x) == pytest.approx(fd, rel=1e-5, abs=1e-5)


def test_pochhammer():
    assert pochhammer(0.5, 0) == 1.0
    assert pochhammer(0.5, 3) == pytest.approx(0.5 * 1.5 * 2.5)
    assert pochhammer(-2.0, 3) == 0.0


def _hyper_fraction(nu, a2, a3, b1, b2):
    total, term = Fraction(0), Fraction(1)
    for k in range(nu + 1):
        total += term
        term *= Fraction(-nu + k) * (a2 + k) * (a3 + k) / ((b1 + k) * (b2 + k) * (k + 1))
    return total


def test_hyper_nu_zero():
    assert hyper3F2_terminating(0, 0.5, 0.5, 0.5, 1.0) == 1.0


def test_hyper_two_term_example():
    assert hyper3F2_terminating(1, 0.5, 0.5, -0.5, 1.0) == pytest.approx(1.5, abs=1e-15)


def test_hyper_rational_oracle():
    # nu = 2, |m| = 1 arguments of the weak-coupling slope
    h = Fraction(1, 2)
    ref = _hyper_fraction(2, 1 + h, h, -2 + h, Fraction(2))
    assert hyper3F2_terminating(2, 1.5, 0.5, -1.5, 2.0) == pytest.approx(float(ref), rel=1e-15)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10), st.integers(0, 8))
def test_hyper_rational_oracle_property(nu, m):
    h = Fraction(1, 2)
    ref = _hyper_fraction(nu, m + h, h, -nu + h, Fraction(m + 1))
    assert hyper3F2_terminating(nu, m + 0.5, 0.5, -nu + 0.5, m + 1.0) == pytest.approx(float(ref), rel=1e-12, abs=1e-14)


@pytest.mark.parametrize("nu", range(6))
def test_hyper_terminates(nu):
    # the (-nu)_k factor vanishes for every k > nu
    for k in range(nu + 1, nu + 5):
        assert pochhammer(-nu, k) == 0.0


def test_hyper_zero_denominator():
    with pytest.raises(ValueError):
        hyper3F2_terminating(3, 0.5, 0.5, -1.0, 1.0)


def test_gauss_legendre_small_orders():
    r1 = gauss_legendre(1)
    assert list(r1.nodes) == [0.0] and list(r1.weights) == [2.0]
    r2 = gauss_legendre(2)
    np.testing.assert_allclose(r2.nodes, [-1 / math.sqrt(3), 1 / math.sqrt(3)], atol=1e-15)
    np.testing.assert_allclose(r2.weights, [1.0, 1.0], atol=1e-15)


def test_gauss_legendre_high_power():
    rule = gauss_legendre(20)
    assert abs(rule.integrate(lambda x: x**38) - 2.0 / 39.0) < 1e-12


@pytest.mark.parametrize("order", [3, 10, 64, 200])
def test_gauss_legendre_matches_numpy(order):
    x, w = np.polynomial.legendre.leggauss(order)
    rule = gauss_legendre(order)
    np.testing.assert_allclose(rule.nodes, x, atol=1e-14)
    np.testing.assert_allclose(rule.weights, w, atol=1e-14)


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 30), st.data())
def test_gauss_legendre_exactness(order, data):
    degree = 2 * order - 1
    coeffs = np.array(data.draw(st.lists(st.floats(-1, 1), min_size=degree + 1, max_size=degree + 1)))
    exact = sum(c * (1 - (-1) ** (k + 1)) / (k + 1) for k, c in enumerate(coeffs))
    got = gauss_legendre(order).integrate(lambda x: np.polynomial.polynomial.polyval(x, coeffs))
    assert got == pytest.approx(exact, abs=1e-12 * max(1.0, np.abs(coeffs).sum()))


def test_mapped_rule():
    x, w = gauss_legendre(30).mapped(0.0, 3.0)
    assert np.dot(w, np.exp(-x)) == pytest.approx(1 - math.exp(-3.0), rel=1e-14)


def test_gauss_legendre_rejects_zero_order():
    with pytest.raises(ValueError):
        gauss_legendre(0)
