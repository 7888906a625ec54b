"""Cartesian, Jacobi and polar (hyperspherical) coordinates for three particles."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

__all__ = [
    "JACOBI",
    "JacobiPoint",
    "PolarPoint",
    "AngleUndefined",
    "to_jacobi",
    "from_jacobi",
    "hyperradius",
    "to_polar",
    "coincidence_angles",
    "interaction_lines",
    "sector_of",
]

_S2, _S3, _S6 = math.sqrt(2.0), math.sqrt(3.0), math.sqrt(6.0)

JACOBI = np.array(
    [
        [1 / _S2, -1 / _S2, 0.0],
        [1 / _S6, 1 / _S6, -2 / _S6],
        [1 / _S3, 1 / _S3, 1 / _S3],
    ]
)


class AngleUndefined(ValueError):
    """Raised when the polar angle is requested at zero hyperradius."""


@dataclass(frozen=True)
class JacobiPoint:
    x1p: float
    x2p: float
    x3p: float


@dataclass(frozen=True)
class PolarPoint:
    rho: float
    phi: float
    xcm: float


def to_jacobi(x: Sequence[float]) -> JacobiPoint:
    v = JACOBI @ np.asarray(x, dtype=float)
    return JacobiPoint(float(v[0]), float(v[1]), float(v[2]))


def from_jacobi(p: JacobiPoint) -> np.ndarray:
    return JACOBI.T @ np.array([p.x1p, p.x2p, p.x3p])


def hyperradius(x: Sequence[float]) -> float:
    """Relative hyperradius of N >= 2 particle positions.

    ((N-1) sum x_i^2 - 2 sum_{i<j} x_i x_j) / N equals the centered sum of
    squares, which is evaluated directly to avoid cancellation far from
    the origin.
    """
    x = np.asarray(x, dtype=float)
    if x.size < 2:
        raise ValueError("hyperradius needs at least two coordinates")
    d = x - x.mean()
    return math.sqrt(float(np.dot(d, d)))


def to_polar(x: Sequence[float]) -> PolarPoint:
    j = to_jacobi(x)
    rho = math.hypot(j.x1p, j.x2p)
    # below round-off of the center of mass the direction carries no information
    if rho <= 1e-14 * max(1.0, abs(j.x3p)):
        raise AngleUndefined("phi is undefined at rho = 0")
    phi = math.atan2(j.x2p, j.x1p) % (2 * math.pi)
    return PolarPoint(rho, phi, j.x3p)


_PAIR_LINES = {
    "12": (math.pi / 2, 3 * math.pi / 2),
    "23": (math.pi / 6, 7 * math.pi / 6),
    "31": (5 * math.pi / 6, 11 * math.pi / 6),
}


def coincidence_angles(pair: str) -> tuple[float, float]:
    """The two polar angles on which the given pair of particles coincide."""
    key = str(pair)
    if key in ("21", "32", "13"):
        key = key[::-1]
    try:
        return _PAIR_LINES[key]
    except KeyError:
        raise ValueError(f"unknown pair {pair!r}; expected one of 12, 23, 31") from None


def interaction_lines() -> np.ndarray:
    """phi_n = (2n - 1) pi / 6 for n = 1..6."""
    return (2 * np.arange(1, 7) - 1) * np.pi / 6


def sector_of(phi: float) -> int:
    """Sector number 1..6; sector 1 spans (-pi/6, pi/6)."""
    t = (phi + math.pi / 6) % (2 * math.pi)
    return int(t // (math.pi / 3)) % 6 + 1
