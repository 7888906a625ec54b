import math

import numpy as np
import pytest
from scipy import integrate, special

from goldilocks.radial import (
    GaussPowerSeries,
    RadialState,
    W_series,
    apply_W_operator,
    casimir_eigenvalue,
    hamiltonian_series,
    ladder_down,
    ladder_up,
    radial_derivative,
    radial_eval,
    radial_series,
)

RHO = np.linspace(0.0, 8.0, 401)


def _gl(order=120, rho_max=14.0):
    x, w = np.polynomial.legendre.leggauss(order)
    return 0.5 * rho_max * (x + 1), 0.5 * rho_max * w


def test_ground_state_closed_form():
    np.testing.assert_allclose(radial_eval(RadialState(0, 0.0), RHO), math.sqrt(2) * np.exp(-RHO**2 / 2), rtol=1e-14)


def test_hand_evaluated_value():
    expected = math.sqrt(1 / 12) * math.exp(-0.5) * 3
    assert radial_eval(RadialState(1, 3.0), 1.0) == pytest.approx(expected, rel=1e-14)


@pytest.mark.parametrize("nu", [0, 1, 2])
@pytest.mark.parametrize("lam", [0.0, 3.0, 4.7])
@pytest.mark.parametrize("n", [3, 4])
def test_normalization(nu, lam, n):
    state = RadialState(nu, lam, n)
    x, w = _gl()
    assert np.dot(w, radial_eval(state, x) ** 2 * x ** (n - 2)) == pytest.approx(1.0, abs=1e-10)


@pytest.mark.parametrize("nu", [0, 2, 5])
@pytest.mark.parametrize("lam", [0.0, 1.0, 4.7])
def test_normalization_against_adaptive_quadrature(nu, lam):
    state = RadialState(nu, lam)
    val, _ = integrate.quad(lambda r: radial_eval(state, r) ** 2 * r, 0, np.inf, epsabs=1e-13, epsrel=1e-13)
    assert val == pytest.approx(1.0, abs=1e-10)


@pytest.mark.parametrize("lam", [0.0, 3.0, 4.7])
def test_orthogonality_six_by_six(lam):
    x, w = _gl()
    R = np.array([radial_eval(RadialState(nu, lam), x) for nu in range(6)])
    np.testing.assert_allclose((R * w * x) @ R.T, np.eye(6), atol=1e-8)


def test_radial_matches_scipy_laguerre():
    state = RadialState(3, 2.5)
    ref = (
        math.sqrt(2 * math.factorial(3) / special.gamma(3 + 2.5 + 1))
        * RHO**2.5
        * np.exp(-RHO**2 / 2)
        * special.eval_genlaguerre(3, 2.5, RHO**2)
    )
    np.testing.assert_allclose(radial_eval(state, RHO), ref, rtol=1e-12, atol=1e-15)


@pytest.mark.parametrize("nu, lam", [(0, 0.0), (1, 0.0), (2, 3.0), (4, 4.7), (3, 0.5)])
def test_radial_derivative(nu, lam):
    state = RadialState(nu, lam)
    rho = np.linspace(0.2, 6.0, 40)
    h = 1e-6
    fd = (radial_eval(state, rho + h) - radial_eval(state, rho - h)) / (2 * h)
    np.testing.assert_allclose(radial_derivative(state, rho), fd, atol=1e-7)
    if lam == 0 or lam >= 1:
        assert np.all(np.isfinite(radial_derivative(state, np.array([0.0]))))


def test_ladder_coefficients():
    assert ladder_down(RadialState(0, 2.0)) == (0.0, None)
    coef, up = ladder_up(RadialState(0, 0.0))
    assert coef == 1.0 and up.nu == 1
    coef, down = ladder_down(RadialState(2, 3.0))
    assert coef == pytest.approx(math.sqrt(10)) and down.nu == 1


@pytest.mark.parametrize("nu", range(5))
@pytest.mark.parametrize("lam", [0.0, 3.0, 4.7])
def test_ladder_closure(nu, lam):
    c_up, up = ladder_up(RadialState(nu, lam))
    c_down, back = ladder_down(up)
    assert back.nu == nu
    assert c_up * c_down == pytest.approx((nu + 1) * (nu + lam + 1), rel=1e-14)


@pytest.mark.parametrize("lam", [0.0, 3.0, 4.7])
def test_W_minus_annihilates_bottom(lam):
    assert np.max(np.abs(apply_W_operator(-1, RadialState(0, lam), RHO))) < 1e-10


@pytest.mark.parametrize("nu", range(6))
@pytest.mark.parametrize("lam", [0.0, 3.0, 4.7])
def test_W_plus_raises(nu, lam):
    state = RadialState(nu, lam)
    coef, up = ladder_up(state)
    np.testing.assert_allclose(apply_W_operator(1, state, RHO), coef * radial_eval(up, RHO), atol=1e-8)


@pytest.mark.parametrize("nu", range(1, 6))
@pytest.mark.parametrize("lam", [0.0, 3.0, 4.7])
def test_W_minus_lowers(nu, lam):
    state = RadialState(nu, lam)
    coef, down = ladder_down(state)
    np.testing.assert_allclose(apply_W_operator(-1, state, RHO), coef * radial_eval(down, RHO), atol=1e-8)


def test_apply_W_sign_validation():
    with pytest.raises(ValueError):
        apply_W_operator(0, RadialState(0, 0.0), RHO)


@pytest.mark.parametrize("n", [3, 4, 5])
@pytest.mark.parametrize("lam", [0.0, 3.0, 4.7])
@pytest.mark.parametrize("nu", range(4))
def test_series_is_eigenstate_and_commutators(n, lam, nu):
    state = RadialState(nu, lam, n)
    f = radial_series(state)
    np.testing.assert_allclose(f(RHO), radial_eval(state, RHO), atol=1e-12)
    H = lambda s: hamiltonian_series(s, lam, n)  # noqa: E731
    np.testing.assert_allclose(H(f)(RHO), state.energy * f(RHO), atol=1e-10)
    for sign in (1, -1):
        W = W_series(sign, f, lam, n)
        comm = H(W) - W_series(sign, H(f), lam, n) - W.scale(2.0 * sign)
        assert np.max(np.abs(comm(RHO))) < 1e-8
        np.testing.assert_allclose(W(RHO), apply_W_operator(sign, state, RHO), atol=1e-10)
    comm = W_series(-1, W_series(1, f, lam, n), lam, n) - W_series(1, W_series(-1, f, lam, n), lam, n) - H(f)
    assert np.max(np.abs(comm(RHO))) < 1e-8


def test_series_rejects_mismatched_powers():
    with pytest.raises(ValueError):
        GaussPowerSeries(0.0, {0: 1.0}) + GaussPowerSeries(0.5, {0: 1.0})


def test_casimir_examples():
    assert casimir_eigenvalue(RadialState(0, 0.0)) == -1.0
    assert casimir_eigenvalue(RadialState(3, 3.0)) == 8.0


@pytest.mark.parametrize("lam", [0.0, 3.0, 4.7])
def test_casimir_independent_of_nu(lam):
    values = [casimir_eigenvalue(RadialState(nu, lam)) for nu in range(6)]
    for v in values:
        assert abs(v - (lam * lam - 1)) < 1e-12


def test_casimir_three_particles_only():
    with pytest.raises(ValueError):
        casimir_eigenvalue(RadialState(0, 0.0, 4))


def test_general_n_conventions():
    s = RadialState(1, 2.0, 4)
    assert s.alpha == 2.5
    assert s.angular_eigenvalue == 2.0 * 3.0
    assert s.energy == 2 + 2.0 + 1.5


@pytest.mark.parametrize("kwargs", [dict(nu=-1, lam=0.0), dict(nu=0, lam=-0.1), dict(nu=0, lam=0.0, n_particles=2)])
def test_state_validation(kwargs):
    with pytest.raises(ValueError):
        RadialState(**kwargs)
