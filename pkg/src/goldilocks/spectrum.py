"""Full three-body spectrum, level curves and coupling slopes."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .angular import (
    UNITARY,
    AngularRoot,
    Coupling,
    FamilyLike,
    find_root,
    rotation_family,
    roots,
)

__all__ = [
    "STATISTICS",
    "Statistics",
    "SpectrumRecord",
    "Level",
    "SpectrumTable",
    "enumerate_spectrum",
    "level_curve",
    "WeakSlope",
    "slope_weak",
    "slope_unitary",
    "slope_numeric",
    "GROUP_TOL",
]

GROUP_TOL = 1e-9

# multiplicity of each D6 irrep in the allowed state space
STATISTICS: dict[str, dict[str, int]] = {
    "distinguishable": {"A1": 1, "A2": 1, "B1": 1, "B2": 1, "E1": 2, "E2": 2},
    "bosons3": {"A1": 1, "A2": 0, "B1": 0, "B2": 1, "E1": 0, "E2": 0},
    "fermions3": {"A1": 0, "A2": 1, "B1": 1, "B2": 0, "E1": 0, "E2": 0},
    "bosons2plus1": {"A1": 1, "A2": 0, "B1": 0, "B2": 1, "E1": 1, "E2": 1},
    "fermions2plus1": {"A1": 0, "A2": 1, "B1": 1, "B2": 0, "E1": 1, "E2": 1},
}


@dataclass(frozen=True)
class Statistics:
    kind: str = "distinguishable"

    def __post_init__(self):
        if self.kind not in STATISTICS:
            raise ValueError(f"unknown statistics {self.kind!r}; choose from {sorted(STATISTICS)}")

    def multiplicity(self, irrep) -> int:
        return STATISTICS[self.kind][str(irrep)]


@dataclass(frozen=True)
class SpectrumRecord:
    root: AngularRoot
    nu: int
    cm_n: int | None
    energy: float
    multiplicity: int

    @property
    def irrep(self):
        return self.root.irrep

    @property
    def key(self) -> tuple:
        r = self.root
        return (r.family.m_bar, r.branch, r.kind, self.nu, self.cm_n)


@dataclass(frozen=True)
class Level:
    energy: float
    multiplicity: int
    irreps: tuple[str, ...]


@dataclass
class SpectrumTable:
    coupling: Coupling
    statistics: Statistics
    include_cm: bool
    records: list[SpectrumRecord]

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    def levels(self, tol: float = GROUP_TOL) -> list[Level]:
        """Records grouped into degenerate levels (energies within ``tol``)."""
        out: list[Level] = []
        group: list[SpectrumRecord] = []
        for rec in self.records:
            if group and rec.energy - group[0].energy > tol:
                out.append(_level(group))
                group = []
            group.append(rec)
        if group:
            out.append(_level(group))
        return out


def _level(group: list[SpectrumRecord]) -> Level:
    return Level(
        energy=group[0].energy,
        multiplicity=sum(r.multiplicity for r in group),
        irreps=tuple(sorted({str(r.irrep) for r in group})),
    )


def enumerate_spectrum(
    coupling: Coupling,
    e_max: float,
    statistics: Statistics | str = "distinguishable",
    include_cm: bool = False,
) -> SpectrumTable:
    """Every state with energy <= e_max.

    Relative energies are 1 + 2 nu + lam; with the center of mass they are
    n + 2 nu + lam + 3/2.  States forbidden by the statistics are dropped.
    """
    if e_max < 1:
        raise ValueError("e_max must be >= 1")
    stats = statistics if isinstance(statistics, Statistics) else Statistics(statistics)
    base = 1.5 if include_cm else 1.0
    lambda_max = e_max - base
    recs: list[SpectrumRecord] = []
    if lambda_max >= 0:
        for fam in range(4):
            for root in roots(fam, max(lambda_max, 1e-300), coupling):
                mult = stats.multiplicity(root.irrep)
                if mult == 0:
                    continue
                nu = 0
                while base + 2 * nu + root.lam <= e_max + 1e-12:
                    e_rel = base + 2 * nu + root.lam
                    if include_cm:
                        n = 0
                        while e_rel + n <= e_max + 1e-12:
                            recs.append(SpectrumRecord(root, nu, n, e_rel + n, mult))
                            n += 1
                    else:
                        recs.append(SpectrumRecord(root, nu, None, e_rel, mult))
                    nu += 1
    recs.sort(key=lambda r: (r.energy, r.key[0], r.key[2], r.key[1], r.key[3], r.key[4] or 0))
    return SpectrumTable(coupling, stats, include_cm, recs)


def level_curve(family: FamilyLike, branch: int, kind: str, delta_grid: Iterable[float]) -> np.ndarray:
    """Array of (delta, lambda) along one branch."""
    fam = rotation_family(family)
    grid = [float(d) for d in delta_grid]
    for d in grid:
        if not 0.0 <= d <= UNITARY:
            raise ValueError(f"delta {d} outside [0, pi/2]")
    lams = [find_root(fam, branch, kind, Coupling(d)).lam for d in grid]
    return np.column_stack([grid, lams]) if grid else np.empty((0, 2))


@dataclass(frozen=True)
class WeakSlope:
    """dE/d delta at delta = 0, or a divergence marker.

    For the divergent ground branch lambda(delta) ~ sqrt(asymptote_coeff * delta).
    """

    value: float | None
    divergent: bool = False
    asymptote_coeff: float | None = None

    def asymptote(self, delta: float) -> float:
        if not self.divergent:
            raise ValueError("only the divergent branch has a square-root asymptote")
        return math.sqrt(self.asymptote_coeff * delta)


def _free_lambda(root: AngularRoot) -> float:
    if root.kind == "flat":
        return root.lam
    return float(root.bracket[0]) if root.bracket is not None else find_root(root.family, root.branch, "moving", Coupling(0.0)).lam


def slope_weak(root: AngularRoot) -> WeakSlope:
    if root.kind == "flat":
        return WeakSlope(0.0)
    m_abs = _free_lambda(root)
    m_bar = root.family.m_bar
    if m_bar in (1, 2):
        return WeakSlope(3.0 / (math.pi * m_abs))
    if m_abs == 0:
        return WeakSlope(None, divergent=True, asymptote_coeff=6.0 / math.pi)
    return WeakSlope(6.0 / (math.pi * m_abs))


def slope_unitary(root: AngularRoot) -> float:
    """(3/pi) lam ((-1)^(lam+1) cos(m_bar pi/3) + 1) at delta = pi/2."""
    if root.kind == "flat":
        lam = int(round(root.lam))
    elif root.bracket is not None:
        lam = int(root.bracket[1])
    else:
        lam = int(round(find_root(root.family, root.branch, "moving", Coupling.unitary()).lam))
    if lam % 3:
        raise ValueError(f"unitary lambda must be a multiple of 3, got {lam}")
    sign = -1.0 if lam % 2 == 0 else 1.0  # (-1)^(lam+1)
    return 3.0 / math.pi * lam * (sign * root.family.c + 1.0)


def slope_numeric(family: FamilyLike, branch: int, kind: str, delta: float, step: float) -> float:
    """Central difference of E(delta) along a branch."""
    if step < 1e-12:
        raise ValueError("finite-difference step below 1e-12 is dominated by round-off")
    lo, hi = delta - step, delta + step
    if lo < 0.0 or hi > UNITARY:
        raise ValueError("delta +/- step must stay within [0, pi/2]")
    f = lambda d: find_root(family, branch, kind, Coupling(d)).lam  # noqa: E731
    return (f(hi) - f(lo)) / (2.0 * step)


def branch_keys(lambda_max: float) -> list[tuple[int, int, str]]:
    """(family, branch, kind) for every branch whose free value is <= lambda_max."""
    out = []
    for fam in range(4):
        for r in roots(fam, lambda_max, Coupling(0.0)):
            out.append((fam, r.branch, r.kind))
    return out


def irrep_of(family: int, kind: str) -> str:
    return str(find_root(family, 0, kind, Coupling(0.0)).irrep)


def branch_sort_key(key: Sequence) -> tuple:
    fam, branch, kind = key
    return (fam, kind, branch)
