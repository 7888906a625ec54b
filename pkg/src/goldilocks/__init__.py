"""Exact solutions of the three-body Goldilocks model in a 1D harmonic trap,
with an exact-diagonalization engine for the contact-interaction model."""

from .angular import (
    UNITARY,
    AngularRoot,
    AngularWaveFunction,
    Coupling,
    IrrepLabel,
    RotationFamily,
    build_wavefunction,
    delta_for_lambda,
    find_root,
    roots,
    solve_lambda,
)
from .contact_ed import EDProblem, ground_energy_study, jacobi_eigenvalues, matched_delta, solve
from .perturb import ContactSlopeInput, contact_weak_slope, near_unitary_basis, perturbed_ratio
from .radial import RadialState, radial_eval
from .spectrum import Statistics, enumerate_spectrum, level_curve, slope_unitary, slope_weak

__version__ = "0.1.0"

__all__ = [
    "UNITARY",
    "AngularRoot",
    "AngularWaveFunction",
    "Coupling",
    "IrrepLabel",
    "RotationFamily",
    "build_wavefunction",
    "delta_for_lambda",
    "find_root",
    "roots",
    "solve_lambda",
    "EDProblem",
    "ground_energy_study",
    "jacobi_eigenvalues",
    "matched_delta",
    "solve",
    "ContactSlopeInput",
    "contact_weak_slope",
    "near_unitary_basis",
    "perturbed_ratio",
    "RadialState",
    "radial_eval",
    "Statistics",
    "enumerate_spectrum",
    "level_curve",
    "slope_unitary",
    "slope_weak",
    "__version__",
]
