"""Perturbative results: contact-model weak-coupling slopes and the
near-unitary Goldilocks basis."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Mapping

import numpy as np

from .angular import (
    AngularWaveFunction,
    Coupling,
    find_root,
    moving_brackets,
    evaluate,
)
from .radial import RadialState, radial_eval
from .specfun import gauss_legendre, hyper3F2_terminating, log_gamma

__all__ = [
    "ContactSlopeInput",
    "angular_factor",
    "contact_weak_slope",
    "contact_weak_slope_quadrature",
    "ALTERNATE_GROUND_SLOPE",
    "perturbed_ratio",
    "NearUnitaryBasis",
    "near_unitary_basis",
    "SECTOR_FAMILY",
]

# an alternative value sometimes given for the contact ground-state slope; the
# overlap formula evaluates to 3/sqrt(2 pi), so this is kept only for reporting
ALTERNATE_GROUND_SLOPE = 2.0 / math.sqrt(2.0 * math.pi)

SECTOR_FAMILY = {
    "A1": (0, "moving"),
    "A2": (0, "flat"),
    "B1": (3, "flat"),
    "B2": (3, "moving"),
    "E1": (1, "moving"),
    "E2": (2, "moving"),
}


@dataclass(frozen=True)
class ContactSlopeInput:
    nu: int
    m_abs: int
    flavor: str = "generic"

    def __post_init__(self):
        if self.nu < 0 or self.m_abs < 0:
            raise ValueError("nu and m_abs must be non-negative")
        if self.flavor not in ("generic", "bosonic", "fermionic"):
            raise ValueError(f"unknown flavor {self.flavor!r}")
        if self.m_abs > 0 and self.m_abs % 3 == 0 and self.flavor == "generic":
            raise ValueError("positive multiples of 3 need flavor 'bosonic' or 'fermionic'")


def angular_factor(inp: ContactSlopeInput) -> float:
    """Sum of |Phi(phi_n)|^2 over the six lines for the free angular state."""
    if inp.m_abs == 0 or inp.m_abs % 3:
        return 3.0 / math.pi
    return 6.0 / math.pi if inp.flavor == "bosonic" else 0.0


def contact_weak_slope(inp: ContactSlopeInput) -> float:
    """dE/dg at g = 0 for the contact model, closed form with a terminating 3F2."""
    A = angular_factor(inp)
    if A == 0.0:
        return 0.0
    nu, m = inp.nu, inp.m_abs
    log_pref = log_gamma(nu + 0.5) + log_gamma(m + 0.5) - log_gamma(nu + 1) - log_gamma(m + 1)
    f32 = hyper3F2_terminating(nu, m + 0.5, 0.5, -nu + 0.5, m + 1.0)
    return A * math.exp(log_pref) / math.sqrt(2.0 * math.pi) * f32


def _rho_rule(order: int, rho_max: float) -> tuple[np.ndarray, np.ndarray]:
    return gauss_legendre(order).mapped(0.0, rho_max)


def contact_weak_slope_quadrature(inp: ContactSlopeInput, order: int = 160) -> float:
    """Same slope as A / sqrt(2) * integral of R^2 d rho, by Gauss-Legendre."""
    A = angular_factor(inp)
    if A == 0.0:
        return 0.0
    state = RadialState(inp.nu, float(inp.m_abs))
    rho_max = math.sqrt(state.energy) + 10.0
    x, w = _rho_rule(order, rho_max)
    return A / math.sqrt(2.0) * float(np.dot(w, radial_eval(state, x) ** 2))


def perturbed_ratio(lambda_inf: int, m_bar: int, delta_E: float) -> float:
    """First-order b_1/a_1 for an energy shift delta_E = E_inf - E below unitarity."""
    lam = int(lambda_inf)
    if lam <= 0 or lam % 3:
        raise ValueError("lambda_inf must be a positive multiple of 3")
    base = -1.0 if lam % 2 == 0 else 1.0  # (-1)^(lam+1)
    if m_bar in (0, 3):
        return base
    c = math.cos(m_bar * math.pi / 3)
    s = math.sin(m_bar * math.pi / 3)
    parity = -base  # (-1)^lam
    return base * (1.0 + (math.pi / 3) * s / (parity - c) * delta_E)


def _unitary_lambdas(sector: str, lambda_max: float) -> list[int]:
    fam, kind = SECTOR_FAMILY[sector]
    if kind == "flat":
        first = 6 if fam == 0 else 3
        return list(range(first, int(lambda_max) + 1, 6))
    return [hi for lo, hi in moving_brackets(fam, max(lambda_max, 1e-9)) if hi <= lambda_max]


@dataclass
class NearUnitaryBasis:
    sector: str
    lambda_inf: list[int]
    delta_E: list[float]
    raw: list[AngularWaveFunction]
    overlap: np.ndarray  # Gram matrix of the normalized raw functions
    transform: np.ndarray  # orthonormal_i = sum_j transform[i, j] raw_j

    def __len__(self) -> int:
        return len(self.raw)

    def raw_values(self, phi) -> np.ndarray:
        return np.array([evaluate(f, phi) for f in self.raw])

    def values(self, phi) -> np.ndarray:
        """Orthonormalized basis functions sampled at ``phi`` (rows)."""
        return self.transform @ self.raw_values(phi)


def _raw_function(lam: float, m: int, ratio: float) -> AngularWaveFunction:
    n = np.arange(6)
    a = np.exp(1j * (m - lam) * math.pi / 3 * n)
    b = ratio * np.exp(1j * (m + lam) * math.pi / 3 * n)
    probe = AngularWaveFunction(lam, m, a, b, 1.0)
    norm = math.sqrt(_inner(probe, probe).real)
    return AngularWaveFunction(lam, m, a / norm, b / norm, norm)


_GL64 = None


def _inner(f: AngularWaveFunction, g: AngularWaveFunction) -> complex:
    global _GL64
    if _GL64 is None:
        _GL64 = gauss_legendre(64)
    total = 0j
    for k in range(6):
        x, w = _GL64.mapped(-math.pi / 6 + k * math.pi / 3, math.pi / 6 + k * math.pi / 3)
        fa = f.a[k] * np.exp(1j * f.lam * x) + f.b[k] * np.exp(-1j * f.lam * x)
        ga = g.a[k] * np.exp(1j * g.lam * x) + g.b[k] * np.exp(-1j * g.lam * x)
        total += np.dot(w, np.conj(fa) * ga)
    return complex(total)


def near_unitary_basis(
    sector: str,
    e_max: float,
    delta_E_source: str = "goldilocks",
    *,
    delta: float | None = None,
    shifts: Mapping[int, float] | Callable[[int], float] | float | None = None,
) -> NearUnitaryBasis:
    """Angular basis built from first-order coefficient ratios below unitarity.

    ``delta_E_source='goldilocks'`` takes E_inf - E from the exact Goldilocks
    branch at ``delta``; ``'external'`` takes it from ``shifts`` (a mapping
    or callable of lambda_inf, or one float for every state).  The raw
    functions are orthonormalized by modified Gram-Schmidt.
    """
    if sector not in SECTOR_FAMILY:
        raise ValueError(f"unknown sector {sector!r}")
    fam, kind = SECTOR_FAMILY[sector]
    lams = _unitary_lambdas(sector, e_max - 1.0)
    if not lams:
        raise ValueError("no unitary-limit states below e_max in this sector")
    dEs: list[float] = []
    for branch, lam_inf in enumerate(lams):
        if kind == "flat":
            dEs.append(0.0)
        elif delta_E_source == "goldilocks":
            if delta is None:
                raise ValueError("delta is required for delta_E_source='goldilocks'")
            lam = find_root(fam, branch, "moving", Coupling(delta)).lam
            dEs.append(lam_inf - lam)
        elif delta_E_source == "external":
            if shifts is None:
                raise ValueError("shifts are required for delta_E_source='external'")
            if callable(shifts):
                dEs.append(float(shifts(lam_inf)))
            elif isinstance(shifts, Mapping):
                dEs.append(float(shifts[lam_inf]))
            else:
                dEs.append(float(shifts))
        else:
            raise ValueError(f"unknown delta_E_source {delta_E_source!r}")
    raw = [_raw_function(li - dE, fam, perturbed_ratio(li, fam, dE)) for li, dE in zip(lams, dEs)]
    k = len(raw)
    gram = np.array([[_inner(raw[i], raw[j]) for j in range(k)] for i in range(k)])
    transform = np.zeros((k, k), dtype=complex)
    for i in range(k):
        v = np.zeros(k, dtype=complex)
        v[i] = 1.0
        for j in range(i):
            proj = transform[j].conj() @ gram @ v
            v = v - proj * transform[j]
        nrm = math.sqrt(max((v.conj() @ gram @ v).real, 0.0))
        transform[i] = v / nrm
    return NearUnitaryBasis(sector, lams, dEs, raw, gram, transform)
