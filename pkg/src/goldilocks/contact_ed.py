"""Exact diagonalization of the three-body contact model (relative motion).

The Hamiltonian is written in an eigenbasis of the Goldilocks model at a
reference coupling ``delta_b`` (``delta_b = 0`` is the ordinary harmonic
oscillator basis):

    H_c(g) = H_G(delta_b) + sum_n Phi_i(phi_n) Phi_j(phi_n)
             * [ g / sqrt(2) * I1_ij - tan(delta_b) * I2_ij ]

with I1 = int R_i R_j d rho and I2 = int R_i R_j d rho / rho.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .angular import (
    UNITARY,
    AngularRoot,
    Coupling,
    build_wavefunction,
    roots,
)
from .coords import interaction_lines
from .perturb import SECTOR_FAMILY
from .radial import RadialState, radial_eval
from .specfun import gauss_legendre

__all__ = [
    "EDProblem",
    "EDResult",
    "BasisState",
    "build_basis",
    "hamiltonian_matrix",
    "matrix_element",
    "diagonalize",
    "jacobi_eigenvalues",
    "solve",
    "StudyRow",
    "GroundEnergyStudy",
    "ground_energy_study",
    "matched_delta",
    "FIT_MODELS",
]


def matched_delta(g: float) -> float:
    """Reference phase paired with contact strength g by 2 tan(delta_b) = g."""
    return math.atan(g / 2.0)


@dataclass(frozen=True)
class EDProblem:
    """Contact strength ``g`` in one symmetry sector.

    ``sector`` is an irrep name; E irreps take an optional column suffix,
    ``'E1'`` / ``'E1:even'`` (sigma_d = +1) or ``'E1:odd'``.  ``max_states``
    keeps only the lowest states below ``e_max``, which lets two bases be
    compared at equal size.
    """

    g: float
    sector: str = "A1"
    basis_kind: str = "harmonic"
    delta_b: float = 0.0
    e_max: float = 10.0
    quadrature_order: int = 200
    max_states: int | None = None

    def __post_init__(self):
        if self.g < 0:
            raise ValueError("g must be non-negative")
        for part in self.sector.split("+"):
            irrep, _, column = part.partition(":")
            if irrep not in SECTOR_FAMILY:
                raise ValueError(f"unknown sector {part!r}")
            if column not in ("", "even", "odd"):
                raise ValueError(f"unknown E column {column!r}")
        if self.basis_kind not in ("harmonic", "goldilocks"):
            raise ValueError(f"unknown basis kind {self.basis_kind!r}")
        if self.basis_kind == "goldilocks" and not (0.0 < self.delta_b < UNITARY):
            raise ValueError("goldilocks basis needs 0 < delta_b < pi/2")
        if self.e_max < 1:
            raise ValueError("e_max must be >= 1")
        if self.max_states is not None and self.max_states < 1:
            raise ValueError("max_states must be positive")

    @property
    def reference(self) -> Coupling:
        return Coupling(self.delta_b if self.basis_kind == "goldilocks" else 0.0)

    @property
    def irreps(self) -> tuple[str, ...]:
        return tuple(s.partition(":")[0] for s in self.sector.split("+"))


@dataclass(frozen=True)
class BasisState:
    nu: int
    root: AngularRoot
    line_values: np.ndarray  # real angular function at the six phi_n
    angular: object = field(repr=False, compare=False)

    @property
    def energy(self) -> float:
        return 1.0 + 2 * self.nu + self.root.lam


@dataclass
class EDResult:
    eigenvalues: np.ndarray
    basis_size: int
    residual: float


def _sector_states(irrep: str, column: str, e_max: float, ref: Coupling) -> list[BasisState]:
    fam, kind = SECTOR_FAMILY[irrep]
    lines = interaction_lines()
    out = []
    for root in roots(fam, max(e_max - 1.0, 1e-12), ref):
        if root.kind != kind:
            continue
        wf = build_wavefunction(root, ref, 1)
        f = wf.real_form(column or "even")
        vals = np.asarray(f(lines), dtype=float)
        nu = 0
        while 1.0 + 2 * nu + root.lam <= e_max + 1e-12:
            out.append(BasisState(nu, root, vals, f))
            nu += 1
    return out


def build_basis(problem: EDProblem) -> list[BasisState]:
    """All (nu, lambda) in the sector with 1 + 2 nu + lambda <= e_max.

    ``problem.sector`` may join several sectors with '+' (e.g. 'A1+B2').
    """
    ref = problem.reference
    states: list[BasisState] = []
    for part in problem.sector.split("+"):
        irrep, _, column = part.partition(":")
        states.extend(_sector_states(irrep, column, problem.e_max, ref))
    if not states:
        raise ValueError(f"empty basis for sector {problem.sector} at e_max={problem.e_max}")
    states.sort(key=lambda s: (s.energy, s.root.family.m_bar, s.root.lam))
    if problem.max_states is not None:
        if len(states) < problem.max_states:
            raise ValueError(f"only {len(states)} states below e_max={problem.e_max}")
        states = states[: problem.max_states]
    return states


def _radial_integrals(problem: EDProblem, basis: Sequence[BasisState]) -> tuple[np.ndarray, np.ndarray | None]:
    e_top = max(s.energy for s in basis)
    rho_max = math.sqrt(max(e_top, problem.e_max)) + 10.0
    x, w = gauss_legendre(problem.quadrature_order).mapped(0.0, rho_max)
    R = np.array([radial_eval(RadialState(s.nu, s.root.lam), x) for s in basis])
    Rw = R * w
    I1 = Rw @ R.T
    I2 = None
    if problem.basis_kind == "goldilocks":
        I2 = (Rw / x) @ R.T
    return I1, I2


def hamiltonian_matrix(problem: EDProblem, basis: Sequence[BasisState] | None = None) -> np.ndarray:
    basis = build_basis(problem) if basis is None else basis
    P = np.array([s.line_values for s in basis])
    ang = P @ P.T
    I1, I2 = _radial_integrals(problem, basis)
    V = (problem.g / math.sqrt(2.0)) * I1
    if I2 is not None:
        V = V - math.tan(problem.delta_b) * I2
    H = ang * V
    H[np.diag_indices_from(H)] += np.array([s.energy for s in basis])
    return 0.5 * (H + H.T)


def matrix_element(problem: EDProblem, i: int, j: int, basis: Sequence[BasisState] | None = None) -> float:
    basis = build_basis(problem) if basis is None else basis
    return float(hamiltonian_matrix(problem, [basis[i], basis[j]] if i != j else [basis[i]])[0, -1])


def jacobi_eigenvalues(a: np.ndarray, tol: float = 1e-12, max_sweeps: int = 100) -> tuple[np.ndarray, float]:
    """Cyclic Jacobi rotations on a dense symmetric matrix.

    Sweeps until the largest off-diagonal element is below ``tol`` times
    the Frobenius norm.  Returns (ascending eigenvalues, final residual).
    """
    a = np.array(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("matrix must be square")
    n = a.shape[0]
    scale = max(1.0, float(np.max(np.abs(a)))) if n else 1.0
    if n and np.max(np.abs(a - a.T)) > 1e-10 * scale:
        raise ValueError("matrix is not symmetric")
    a = 0.5 * (a + a.T)
    if n <= 1:
        return np.sort(np.diag(a)), 0.0
    norm = float(np.linalg.norm(a))
    target = tol * norm if norm > 0 else 0.0
    iu = np.triu_indices(n, 1)

    def off_max() -> float:
        return float(np.max(np.abs(a[iu])))

    off = off_max()
    for _ in range(max_sweeps):
        if off <= target:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= 0.1 * target:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                ap = a[:, p].copy()
                aq = a[:, q]
                a[:, p] = c * ap - s * aq
                a[:, q] = s * ap + c * aq
                ap = a[p, :].copy()
                aq = a[q, :]
                a[p, :] = c * ap - s * aq
                a[q, :] = s * ap + c * aq
                a[p, q] = a[q, p] = 0.0
        off = off_max()
    return np.sort(np.diag(a)), off


def diagonalize(matrix: np.ndarray) -> np.ndarray:
    """Ascending eigenvalues of a dense symmetric matrix."""
    return jacobi_eigenvalues(matrix)[0]


def solve(problem: EDProblem) -> EDResult:
    basis = build_basis(problem)
    H = hamiltonian_matrix(problem, basis)
    vals, res = jacobi_eigenvalues(H)
    return EDResult(vals, len(basis), res)


@dataclass(frozen=True)
class StudyRow:
    e_max: float
    basis_size: int
    e0: float


@dataclass
class GroundEnergyStudy:
    g: float
    sector: str
    basis_kind: str
    delta_b: float
    rows: list[StudyRow]
    extrapolated: float
    fit_slope: float
    fit_residual: float
    fit_model: str = "inverse_size"

    @property
    def monotone(self) -> bool:
        e = [r.e0 for r in self.rows]
        return all(b <= a + 1e-10 for a, b in zip(e, e[1:]))


FIT_MODELS = ("inverse_size", "cusp")


def _fit_design(rows: Sequence[StudyRow], model: str) -> np.ndarray:
    if model == "inverse_size":
        inv = np.array([1.0 / r.basis_size for r in rows])
        return np.column_stack([np.ones_like(inv), inv])
    if model == "cusp":
        # the contact cusp makes the error fall like a power series in 1/sqrt(e_max)
        e = np.array([r.e_max for r in rows], dtype=float)
        return np.column_stack([np.ones_like(e), e**-0.5, 1.0 / e])
    raise ValueError(f"unknown fit model {model!r}; choose from {FIT_MODELS}")


def ground_energy_study(
    g: float,
    sector: str,
    basis_kind: str,
    cutoffs: Sequence[float],
    delta_b: float | None = None,
    quadrature_order: int = 200,
    fit_model: str = "inverse_size",
    map_fn: Callable = map,
) -> GroundEnergyStudy:
    """Lowest eigenvalue against basis cutoff, extrapolated to an infinite basis.

    ``fit_model='inverse_size'`` fits linearly in 1/basis_size.  ``'cusp'``
    fits a + b e_max^(-1/2) + c / e_max, which tracks the slow convergence of
    a smooth basis against the contact cusp far better once e_max >= 20; below
    that the two correction terms are not yet separable and the fit is erratic.  ``map_fn`` may be an
    executor's ``map`` to solve the cutoffs concurrently; order is preserved.
    """
    cutoffs = list(cutoffs)
    if any(b < a for a, b in zip(cutoffs, cutoffs[1:])):
        raise ValueError("cutoffs must be ascending")
    if fit_model not in FIT_MODELS:
        raise ValueError(f"unknown fit model {fit_model!r}; choose from {FIT_MODELS}")
    if basis_kind == "goldilocks" and delta_b is None:
        delta_b = matched_delta(g)
    db = delta_b if basis_kind == "goldilocks" else 0.0
    problems = [EDProblem(g, sector, basis_kind, db, e_max, quadrature_order) for e_max in cutoffs]
    rows = [
        StudyRow(p.e_max, res.basis_size, float(res.eigenvalues[0]))
        for p, res in zip(problems, map_fn(solve, problems))
    ]
    e0 = np.array([r.e0 for r in rows])
    X = _fit_design(rows, fit_model)
    if len(rows) >= X.shape[1] and np.linalg.matrix_rank(X) == X.shape[1]:
        coef = np.linalg.lstsq(X, e0, rcond=None)[0]
        intercept, slope = float(coef[0]), float(coef[1])
        resid = float(np.max(np.abs(X @ coef - e0)))
    else:
        intercept, slope, resid = float(e0[-1]), 0.0, 0.0
    return GroundEnergyStudy(g, sector, basis_kind, db, rows, intercept, slope, resid, fit_model)
