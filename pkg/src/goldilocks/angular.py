"""Angular eigenproblem on the ring with six delta-function lines.

The angular operator is ``-d^2/dphi^2 + kink * sum_n delta(phi - phi_n)``
with ``phi_n = (2n - 1) pi / 6``.  Its eigenvalues are ``lambda**2``.
Eigenstates are labelled by a rotation family (the C6 eigenvalue class,
``m mod 6`` up to sign), a branch index and a kind:

* ``flat`` roots: ``lambda = 3j``, independent of the coupling; the wave
  function vanishes on every interaction line.
* ``moving`` roots: one per bracket ``(lo, hi)``, where ``lo`` is the free
  value ``|m|`` and ``hi`` the next multiple of three.

The coupling is carried as the phase ``delta`` in ``[0, pi/2]`` with
``kink = 2 tan(delta)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Union

import numpy as np

__all__ = [
    "UNITARY",
    "Coupling",
    "RotationFamily",
    "IrrepLabel",
    "AngularRoot",
    "AngularWaveFunction",
    "BracketError",
    "rotation_family",
    "flat_roots",
    "moving_brackets",
    "solve_lambda",
    "quantization_residual",
    "delta_for_lambda",
    "roots",
    "find_root",
    "classify",
    "build_wavefunction",
    "coefficient_ratio",
    "evaluate",
    "evaluate_derivative",
    "line_residuals",
]

UNITARY = math.pi / 2
_THIRD = math.pi / 3
_SIXTH = math.pi / 6
_COS = (1.0, 0.5, -0.5, -1.0)
_SIN = (0.0, math.sqrt(3.0) / 2, math.sqrt(3.0) / 2, 0.0)


class BracketError(RuntimeError):
    """No sign change inside a moving-root bracket (indicates a bug)."""


@dataclass(frozen=True)
class Coupling:
    """Interaction strength stored as the phase delta, tan(delta) = kink / 2."""

    delta: float

    def __post_init__(self):
        if not (0.0 <= self.delta <= UNITARY):
            raise ValueError(f"delta must lie in [0, pi/2], got {self.delta!r}")

    @classmethod
    def from_kink(cls, kink: float) -> "Coupling":
        if kink < 0:
            raise ValueError("kink strength must be non-negative")
        if math.isinf(kink):
            return cls(UNITARY)
        return cls(math.atan(kink / 2.0))

    @classmethod
    def unitary(cls) -> "Coupling":
        return cls(UNITARY)

    @property
    def is_unitary(self) -> bool:
        return self.delta == UNITARY

    @property
    def kink(self) -> float:
        if self.is_unitary:
            return math.inf
        return 2.0 * math.tan(self.delta)


@dataclass(frozen=True)
class RotationFamily:
    """C6 class ``m_bar`` in {0, 1, 2, 3}; only cos(m pi / 3) enters the spectrum."""

    m_bar: int

    def __post_init__(self):
        if self.m_bar not in (0, 1, 2, 3):
            raise ValueError(f"m_bar must be 0..3, got {self.m_bar!r}")

    @property
    def c(self) -> float:
        return _COS[self.m_bar]

    @property
    def s(self) -> float:
        return _SIN[self.m_bar]

    @property
    def is_doublet(self) -> bool:
        return self.m_bar in (1, 2)


FamilyLike = Union[int, RotationFamily]


def rotation_family(family: FamilyLike) -> RotationFamily:
    return family if isinstance(family, RotationFamily) else RotationFamily(int(family))


@dataclass(frozen=True)
class IrrepLabel:
    name: str

    def __post_init__(self):
        if self.name not in ("A1", "A2", "B1", "B2", "E1", "E2"):
            raise ValueError(f"unknown D6 irrep {self.name!r}")

    @property
    def dim(self) -> int:
        return 2 if self.name.startswith("E") else 1

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class AngularRoot:
    family: RotationFamily
    branch: int
    kind: str
    lam: float
    irrep: IrrepLabel
    delta: float = 0.0
    bracket: tuple[float, float] | None = field(default=None, compare=False)

    @property
    def m_bar(self) -> int:
        return self.family.m_bar


# ---------------------------------------------------------------- brackets


@lru_cache(maxsize=None)
def _free_values(m_bar: int, count: int) -> tuple[int, ...]:
    """First ``count`` values |m| >= 0 with cos(|m| pi / 3) == cos(m_bar pi / 3)."""
    residues = {m_bar, (6 - m_bar) % 6}
    out: list[int] = []
    v = 0
    while len(out) < count:
        if v % 6 in residues:
            out.append(v)
        v += 1
    return tuple(out)


def _free_values_upto(m_bar: int, lambda_max: float) -> list[int]:
    n = int(lambda_max // 3) + 4
    return [v for v in _free_values(m_bar, n) if v <= lambda_max]


def moving_brackets(family: FamilyLike, lambda_max: float) -> list[tuple[int, int]]:
    """Open intervals (|m|, next multiple of 3) holding one moving root each."""
    if not lambda_max > 0:
        raise ValueError("lambda_max must be positive")
    fam = rotation_family(family)
    return [(lo, 3 * (lo // 3 + 1)) for lo in _free_values_upto(fam.m_bar, lambda_max)]


def flat_roots(family: FamilyLike, lambda_max: float) -> list[AngularRoot]:
    """Coupling-independent roots lambda = 3j with cos(j pi) equal to the family's c."""
    if not lambda_max > 0:
        raise ValueError("lambda_max must be positive")
    fam = rotation_family(family)
    if fam.m_bar == 0:
        lams = range(6, int(lambda_max) + 1, 6)
    elif fam.m_bar == 3:
        lams = range(3, int(lambda_max) + 1, 6)
    else:
        return []
    irrep = IrrepLabel("A2" if fam.m_bar == 0 else "B1")
    return [AngularRoot(fam, j, "flat", float(lam), irrep) for j, lam in enumerate(lams)]


# ---------------------------------------------------------------- root finding


class _BracketFunction:
    """Quantization function on a bracket, parametrized by t = lambda - lo.

    For brackets whose lower endpoint is itself a coupling-independent zero
    (lo a multiple of 3 with the family's parity, including lo = 0) the
    factor sin(t pi / 6) is divided out analytically.
    """

    def __init__(self, fam: RotationFamily, lo: int, sd: float, cd: float):
        self.lo = lo
        self.c = fam.c
        self.s_lo = math.sin(lo * _THIRD) if lo % 3 else 0.0
        self.reduced = lo % 3 == 0
        self.sd, self.cd = sd, cd

    def __call__(self, t: float) -> tuple[float, float]:
        lo, sd, cd = self.lo, self.sd, self.cd
        if self.reduced:
            s6, c6 = math.sin(t * _SIXTH), math.cos(t * _SIXTH)
            g = sd * c6 - cd * (lo + t) * s6
            dg = -sd * _SIXTH * s6 - cd * (s6 + (lo + t) * _SIXTH * c6)
            return g, dg
        s3, c3 = math.sin(t * _THIRD), math.cos(t * _THIRD)
        S = self.s_lo * c3 + self.c * s3
        dS = _THIRD * (-self.s_lo * s3 + self.c * c3)
        D = 2.0 * math.sin((2 * lo + t) * _SIXTH) * math.sin(t * _SIXTH)
        f = sd * S - cd * (lo + t) * D
        df = sd * dS - cd * (D + (lo + t) * _THIRD * S)
        return f, df


def quantization_residual(family: FamilyLike, lam: float, delta: float) -> float:
    """F(lambda) = sin(delta) sin(lambda pi/3) - cos(delta) lambda (c - cos(lambda pi/3))."""
    fam = rotation_family(family)
    lo = min(_free_values_upto(fam.m_bar, lam + 6), key=lambda v: abs(v - lam))
    t = lam - lo
    S = math.sin(lam * _THIRD)
    D = 2.0 * math.sin((lam + lo) * _SIXTH) * math.sin(t * _SIXTH)
    return math.sin(delta) * S - math.cos(delta) * lam * D


def solve_lambda(family: FamilyLike, bracket: tuple[float, float], coupling: Coupling) -> float:
    """The unique moving root of the quantization condition inside ``bracket``."""
    fam = rotation_family(family)
    lo, hi = int(round(bracket[0])), int(round(bracket[1]))
    if lo not in _free_values_upto(fam.m_bar, lo) or hi != 3 * (lo // 3 + 1):
        raise ValueError(f"{bracket} is not a moving-root bracket of family {fam.m_bar}")
    if coupling.delta == 0.0:
        return float(lo)
    if coupling.is_unitary:
        return float(hi)
    sd, cd = math.sin(coupling.delta), math.cos(coupling.delta)
    fn = _BracketFunction(fam, lo, sd, cd)
    w = float(hi - lo)
    a, b = 0.0, w
    fa = fn(a)[0]
    fb = fn(b)[0]
    if fa == 0.0:
        return float(lo)
    if fb == 0.0:
        return float(hi)
    if (fa > 0) == (fb > 0):
        raise BracketError(f"no sign change on family {fam.m_bar} bracket {bracket}")
    sa = fa > 0
    while b - a > 1e-8:
        mid = 0.5 * (a + b)
        fm = fn(mid)[0]
        if fm == 0.0:
            a = b = mid
            break
        if (fm > 0) == sa:
            a = mid
        else:
            b = mid
    t = 0.5 * (a + b)
    for _ in range(50):
        f, df = fn(t)
        if f == 0.0 or df == 0.0:
            break
        step = f / df
        t_new = t - step
        if not (a <= t_new <= b):
            t_new = 0.5 * (a + b)
        if (fn(t_new)[0] > 0) == sa:
            a = max(a, t_new)
        else:
            b = min(b, t_new)
        if abs(t_new - t) <= 4e-16 * max(1.0, lo + t):
            t = t_new
            break
        t = t_new
    return lo + t


def delta_for_lambda(family: FamilyLike, lam: float) -> float:
    """Inverse of the quantization condition along a moving branch.

    Returns delta with tan(delta) = lambda (c - cos(lambda pi/3)) / sin(lambda pi/3).
    """
    fam = rotation_family(family)
    lo = max(v for v in _free_values_upto(fam.m_bar, lam) if v <= lam)
    t = lam - lo
    if lo % 3 == 0:
        # tan(delta) = (lo + t) tan(t pi / 6)
        return math.atan2((lo + t) * math.sin(t * _SIXTH), math.cos(t * _SIXTH))
    D = 2.0 * math.sin((lam + lo) * _SIXTH) * math.sin(t * _SIXTH)
    S = math.sin(lam * _THIRD)
    return math.atan2(lam * D * math.copysign(1.0, S), abs(S))


def classify(root: AngularRoot) -> IrrepLabel:
    m_bar = root.family.m_bar
    if m_bar == 1:
        return IrrepLabel("E1")
    if m_bar == 2:
        return IrrepLabel("E2")
    if m_bar == 0:
        return IrrepLabel("A2" if root.kind == "flat" else "A1")
    return IrrepLabel("B1" if root.kind == "flat" else "B2")


def _moving_irrep(m_bar: int) -> IrrepLabel:
    return IrrepLabel(("A1", "E1", "E2", "B2")[m_bar])


def roots(family: FamilyLike, lambda_max: float, coupling: Coupling) -> list[AngularRoot]:
    """All roots of one family with lambda <= lambda_max, sorted by lambda."""
    fam = rotation_family(family)
    out = [
        AngularRoot(fam, j, "flat", r.lam, r.irrep, coupling.delta, None)
        for j, r in enumerate(flat_roots(fam, lambda_max))
    ]
    for j, br in enumerate(moving_brackets(fam, lambda_max)):
        lam = solve_lambda(fam, br, coupling)
        if lam <= lambda_max:
            out.append(AngularRoot(fam, j, "moving", lam, _moving_irrep(fam.m_bar), coupling.delta, br))
    out.sort(key=lambda r: (r.lam, r.kind))
    return out


def find_root(family: FamilyLike, branch: int, kind: str, coupling: Coupling) -> AngularRoot:
    """Look up a single branch by (family, branch, kind) at the given coupling."""
    fam = rotation_family(family)
    if branch < 0:
        raise ValueError("branch must be non-negative")
    if kind == "flat":
        if fam.m_bar in (1, 2):
            raise ValueError(f"family {fam.m_bar} has no flat roots")
        first = 6 if fam.m_bar == 0 else 3
        lam = float(first + 6 * branch)
        return AngularRoot(fam, branch, "flat", lam, classify_kind(fam, "flat"), coupling.delta)
    if kind != "moving":
        raise ValueError(f"kind must be 'moving' or 'flat', got {kind!r}")
    lo = _free_values(fam.m_bar, branch + 1)[branch]
    br = (lo, 3 * (lo // 3 + 1))
    lam = solve_lambda(fam, br, coupling)
    return AngularRoot(fam, branch, "moving", lam, _moving_irrep(fam.m_bar), coupling.delta, br)


def classify_kind(fam: RotationFamily, kind: str) -> IrrepLabel:
    return classify(AngularRoot(fam, 0, kind, 0.0, IrrepLabel("A1")))


# ---------------------------------------------------------------- wave functions

_SECTOR_MID = np.arange(6) * _THIRD  # midpoint of sector n+1


@dataclass(frozen=True)
class AngularWaveFunction:
    """Piecewise plane waves a_n e^{i lam phi} + b_n e^{-i lam phi}, n = 1..6.

    Sector n covers ((2n - 3) pi / 6, (2n - 1) pi / 6); angles are reduced to
    [-pi/6, 11 pi/6) before evaluation.  ``norm`` is the L2 norm of the
    unnormalized coefficients; stored coefficients are normalized.
    """

    lam: float
    m: int
    a: np.ndarray
    b: np.ndarray
    norm: float

    def __call__(self, phi):
        return evaluate(self, phi)

    def derivative(self, phi, side: int = 0):
        return evaluate_derivative(self, phi, side)

    def line_values(self, n: int) -> tuple[complex, complex, complex, complex]:
        """(Phi-, Phi+, Phi'-, Phi'+) at interaction line n (1..6)."""
        left = n - 1
        right = n % 6
        u_left = (2 * n - 1) * _SIXTH
        u_right = u_left if n < 6 else -_SIXTH
        return (
            _plane(self, left, u_left, 0),
            _plane(self, right, u_right, 0),
            _plane(self, left, u_left, 1),
            _plane(self, right, u_right, 1),
        )

    def real_form(self, column: str = "even"):
        """Real-valued orthonormal function spanning the same state.

        One-dimensional irreps: the wave function with its global phase removed.
        E irreps: sqrt(2) Re (column 'even', sigma_d = +1) or sqrt(2) Im ('odd').
        """
        if self.m % 3 == 0:
            grid = np.linspace(-_SIXTH, 11 * _SIXTH, 97)
            z = np.sum(evaluate(self, grid) ** 2)
            phase = np.exp(-0.5j * np.angle(z)) if abs(z) > 0 else 1.0
            return lambda phi: np.real(phase * evaluate(self, phi))
        if column == "even":
            return lambda phi: math.sqrt(2.0) * np.real(evaluate(self, phi))
        if column == "odd":
            return lambda phi: math.sqrt(2.0) * np.imag(evaluate(self, phi))
        raise ValueError("column must be 'even' or 'odd'")


def _plane(wf: AngularWaveFunction, k: int, u, order: int):
    lam = wf.lam
    ep = np.exp(1j * lam * u)
    em = np.exp(-1j * lam * u)
    if order == 0:
        return wf.a[k] * ep + wf.b[k] * em
    return 1j * lam * (wf.a[k] * ep - wf.b[k] * em)


def _reduce(phi, side: int = 0):
    phi = np.asarray(phi, dtype=float)
    u = np.mod(phi + _SIXTH, 2 * math.pi) - _SIXTH
    k = np.floor((u + _SIXTH) / _THIRD).astype(int)
    if side:
        on_line = np.isclose(np.mod(u + _SIXTH, _THIRD), 0.0, atol=1e-13) | np.isclose(
            np.mod(u + _SIXTH, _THIRD), _THIRD, atol=1e-13
        )
        k_line = np.rint((u + _SIXTH) / _THIRD).astype(int)
        if side < 0:
            k = np.where(on_line, k_line - 1, k)
        else:
            k = np.where(on_line, k_line, k)
        # the line at 11pi/6 == -pi/6 joins sector 6 (left) to sector 1 (right)
        wrap = k == -1
        u = np.where(wrap, u + 2 * math.pi, u)
        k = np.where(wrap, 5, k)
        over = k == 6
        u = np.where(over, u - 2 * math.pi, u)
        k = np.where(over, 0, k)
    k = np.clip(k, 0, 5)
    return u, k


def evaluate(wf: AngularWaveFunction, phi):
    u, k = _reduce(phi)
    out = wf.a[k] * np.exp(1j * wf.lam * u) + wf.b[k] * np.exp(-1j * wf.lam * u)
    return out if np.ndim(out) else complex(out)


def evaluate_derivative(wf: AngularWaveFunction, phi, side: int = 0):
    """dPhi/dphi; ``side`` = -1 / +1 selects the one-sided value on a line."""
    u, k = _reduce(phi, side)
    out = 1j * wf.lam * (wf.a[k] * np.exp(1j * wf.lam * u) - wf.b[k] * np.exp(-1j * wf.lam * u))
    return out if np.ndim(out) else complex(out)


def coefficient_ratio(lam: float, m: int, kink: float) -> float:
    """b_1 / a_1 in the kink-strength form; diverges as kink -> 0."""
    if math.isinf(kink):
        return -math.cos(lam * _THIRD)
    return (2.0 * lam / kink) * (math.sin(lam * _THIRD) - math.sin(m * _THIRD)) - math.cos(lam * _THIRD)


def _sector_norm_sq(lam: float, a: np.ndarray, b: np.ndarray) -> float:
    if lam == 0.0:
        osc = np.full(6, _THIRD, dtype=complex)
    else:
        osc = np.exp(2j * lam * _SECTOR_MID) * (math.sin(lam * _THIRD) / lam)
    total = (np.abs(a) ** 2 + np.abs(b) ** 2) * _THIRD + 2.0 * np.real(a * np.conj(b) * osc)
    return float(np.sum(total))


def build_wavefunction(root: AngularRoot, coupling: Coupling | None = None, m_sign: int = 1) -> AngularWaveFunction:
    """Six-sector normalized wave function for ``root``.

    Moving roots take b_1/a_1 from continuity at phi_1 and propagate by the
    C6 recursion; flat roots are sin(lam (phi - pi/6)).  The global phase is
    fixed so that a_1 is real and positive (b_1 when a_1 vanishes).
    """
    if m_sign not in (1, -1):
        raise ValueError("m_sign must be +1 or -1")
    lam = root.lam
    m_bar = root.family.m_bar
    m = m_sign * m_bar
    if root.kind == "flat":
        a1 = np.exp(-1j * lam * _SIXTH) / 2j
        b1 = -np.exp(1j * lam * _SIXTH) / 2j
    elif m_bar == 0:
        a1, b1 = 1.0 + 0j, 1.0 + 0j
    elif m_bar == 3:
        a1, b1 = 1.0 + 0j, -1.0 + 0j
    else:
        a1 = complex(math.sin((lam + m) * _SIXTH))
        b1 = complex(math.sin((lam - m) * _SIXTH))
    n = np.arange(6)
    a = a1 * np.exp(1j * (m - lam) * _THIRD * n)
    b = b1 * np.exp(1j * (m + lam) * _THIRD * n)
    norm = math.sqrt(_sector_norm_sq(lam, a, b))
    ref = a1 if abs(a1) > 1e-12 * max(abs(a1), abs(b1)) else b1
    phase = np.conj(ref) / abs(ref)
    a = a * phase / norm
    b = b * phase / norm
    return AngularWaveFunction(lam, m, a, b, norm)


def line_residuals(wf: AngularWaveFunction, coupling: Coupling) -> tuple[np.ndarray, np.ndarray]:
    """Continuity and kink residuals at the six interaction lines.

    The kink residual is |Phi'+ - Phi'- - kink Phi| relative to
    lam (|a_1| + |b_1|) + |kink Phi|; at unitarity it is |Phi(phi_n)|.
    """
    cont = np.empty(6)
    kink_res = np.empty(6)
    scale = wf.lam * (abs(wf.a[0]) + abs(wf.b[0]))
    for n in range(1, 7):
        lo, hi, dlo, dhi = wf.line_values(n)
        cont[n - 1] = abs(hi - lo)
        mid = 0.5 * (lo + hi)
        if coupling.is_unitary:
            kink_res[n - 1] = abs(mid)
        else:
            jump = coupling.kink * mid
            kink_res[n - 1] = abs((dhi - dlo) - jump) / max(scale + abs(jump), 1e-300)
    return cont, kink_res
