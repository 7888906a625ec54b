"""Hyperradial eigenfunctions and the SO(2,1) ladder algebra.

For N particles the relative space has dimension N - 1, the inner product
measure is ``rho**(N-2) d rho`` and the angular eigenvalue is
``lam (lam + N - 3)``.  Ladder operators are

    W_pm = 1/2 (H - rho^2 pm ((N-1)/2 + rho d/drho)).

Two routes are provided: sampled application on eigenstates (H replaced by
its eigenvalue) and an exact symbolic route on ``GaussPowerSeries`` where H
acts as the differential operator.  The second is used to check the
commutation relations without assuming them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .specfun import laguerre, laguerre_derivative, log_gamma

__all__ = [
    "RadialState",
    "radial_eval",
    "radial_derivative",
    "ladder_up",
    "ladder_down",
    "apply_W_operator",
    "casimir_eigenvalue",
    "GaussPowerSeries",
    "radial_series",
    "hamiltonian_series",
    "W_series",
]


@dataclass(frozen=True)
class RadialState:
    nu: int
    lam: float
    n_particles: int = 3

    def __post_init__(self):
        if self.nu < 0:
            raise ValueError("nu must be non-negative")
        if self.lam < 0:
            raise ValueError("lam must be non-negative")
        if self.n_particles < 3:
            raise ValueError("n_particles must be >= 3")

    @property
    def alpha(self) -> float:
        """Laguerre parameter lam + (N - 3) / 2."""
        return self.lam + 0.5 * (self.n_particles - 3)

    @property
    def energy(self) -> float:
        return 2 * self.nu + self.lam + 0.5 * (self.n_particles - 1)

    @property
    def angular_eigenvalue(self) -> float:
        return self.lam * (self.lam + self.n_particles - 3)

    @property
    def log_norm(self) -> float:
        return 0.5 * (math.log(2.0) + log_gamma(self.nu + 1) - log_gamma(self.nu + self.alpha + 1))


def radial_eval(state: RadialState, rho):
    rho = np.asarray(rho, dtype=float)
    x = rho * rho
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.exp(state.log_norm - 0.5 * x) * rho**state.lam * laguerre(state.nu, state.alpha, x)
    return out if out.ndim else float(out)


def radial_derivative(state: RadialState, rho):
    """dR/drho, analytic."""
    rho = np.asarray(rho, dtype=float)
    x = rho * rho
    L = laguerre(state.nu, state.alpha, x)
    dL = laguerre_derivative(state.nu, state.alpha, x)
    pref = np.exp(state.log_norm - 0.5 * x)
    # lam rho^(lam-1) L + rho^(lam+1) (2 L' - L); the first term is absent for lam = 0
    with np.errstate(divide="ignore"):
        # diverges at rho = 0 for 0 < lam < 1, as the function itself does
        lead = state.lam * rho ** (state.lam - 1.0) * L if state.lam else 0.0
    out = pref * (lead + rho ** (state.lam + 1.0) * (2.0 * dL - L))
    return out if out.ndim else float(out)


def ladder_up(state: RadialState) -> tuple[float, RadialState]:
    coef = math.sqrt((state.nu + 1) * (state.nu + state.alpha + 1))
    return coef, replace(state, nu=state.nu + 1)


def ladder_down(state: RadialState) -> tuple[float, RadialState | None]:
    if state.nu == 0:
        return 0.0, None
    coef = math.sqrt(state.nu * (state.nu + state.alpha))
    return coef, replace(state, nu=state.nu - 1)


def apply_W_operator(sign: int, state: RadialState, rho_grid):
    """Sample W_pm R on ``rho_grid`` using analytic derivatives, H -> E."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    rho = np.asarray(rho_grid, dtype=float)
    R = radial_eval(state, rho)
    rdR = rho * radial_derivative(state, rho)
    half_d = 0.5 * (state.n_particles - 1)
    return 0.5 * ((state.energy - rho * rho) * R + sign * (half_d * R + rdR))


def casimir_eigenvalue(state: RadialState) -> float:
    """H^2 - 2 (W+W- + W-W+) on a three-body eigenstate."""
    if state.n_particles != 3:
        raise ValueError("casimir_eigenvalue is defined for N = 3")
    nu, lam = state.nu, state.lam
    e = 1 + 2 * nu + lam
    return e * e - 2 * (nu * (nu + lam) + (nu + 1) * (nu + lam + 1))


# ---------------------------------------------------------------- exact route


class GaussPowerSeries:
    """f(rho) = exp(-rho^2/2) * sum_k c_k rho^(p + k), k integer.

    Closed under d/drho, multiplication by rho^j and linear combination,
    which is all the radial Hamiltonian and the W operators need.
    """

    def __init__(self, p: float, coeffs: dict[int, float]):
        self.p = p
        self.coeffs = {k: v for k, v in coeffs.items() if v != 0.0}

    def __add__(self, other: "GaussPowerSeries") -> "GaussPowerSeries":
        self._check(other)
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, 0.0) + v
        return GaussPowerSeries(self.p, out)

    def __sub__(self, other: "GaussPowerSeries") -> "GaussPowerSeries":
        return self + other.scale(-1.0)

    def _check(self, other):
        if abs(self.p - other.p) > 0:
            raise ValueError("series with different base powers")

    def scale(self, s: float) -> "GaussPowerSeries":
        return GaussPowerSeries(self.p, {k: s * v for k, v in self.coeffs.items()})

    def shift(self, j: int) -> "GaussPowerSeries":
        """Multiply by rho^j."""
        return GaussPowerSeries(self.p, {k + j: v for k, v in self.coeffs.items()})

    def diff(self) -> "GaussPowerSeries":
        out: dict[int, float] = {}
        for k, v in self.coeffs.items():
            e = self.p + k
            out[k - 1] = out.get(k - 1, 0.0) + e * v
            out[k + 1] = out.get(k + 1, 0.0) - v
        return GaussPowerSeries(self.p, out)

    def __call__(self, rho):
        rho = np.asarray(rho, dtype=float)
        total = np.zeros_like(rho)
        for k, v in self.coeffs.items():
            total = total + v * rho ** (self.p + k)
        return total * np.exp(-0.5 * rho * rho)


def radial_series(state: RadialState) -> GaussPowerSeries:
    """Exact series form of the normalized radial function."""
    nu, a = state.nu, state.alpha
    # Laguerre coefficients l_j of x^j, generated by term ratios
    lj = math.exp(log_gamma(nu + a + 1) - log_gamma(nu + 1) - log_gamma(a + 1))
    norm = math.exp(state.log_norm)
    coeffs = {}
    for j in range(nu + 1):
        coeffs[2 * j] = norm * lj
        lj *= -(nu - j) / ((j + 1) * (a + j + 1))
    return GaussPowerSeries(state.lam, coeffs)


def hamiltonian_series(f: GaussPowerSeries, lam: float, n_particles: int = 3) -> GaussPowerSeries:
    """1/2 (-f'' - (N-2)/rho f' + rho^2 f + lam(lam+N-3)/rho^2 f)."""
    d1 = f.diff()
    d2 = d1.diff()
    big_lambda = lam * (lam + n_particles - 3)
    out = d2.scale(-1.0) - d1.shift(-1).scale(n_particles - 2) + f.shift(2) + f.shift(-2).scale(big_lambda)
    return out.scale(0.5)


def W_series(sign: int, f: GaussPowerSeries, lam: float, n_particles: int = 3) -> GaussPowerSeries:
    """W_pm applied with H acting as the differential operator."""
    hf = hamiltonian_series(f, lam, n_particles)
    dil = f.scale(0.5 * (n_particles - 1)) + f.diff().shift(1)
    return (hf - f.shift(2) + dil.scale(float(sign))).scale(0.5)
