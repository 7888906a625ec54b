"""Special functions and quadrature primitives.

Everything here is a pure function of its arguments. Arrays are accepted
wherever the underlying formula vectorizes (Laguerre polynomials in ``x``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "QuadratureRule",
    "log_gamma",
    "laguerre",
    "laguerre_derivative",
    "pochhammer",
    "hyper3F2_terminating",
    "gauss_legendre",
]


@dataclass(frozen=True)
class QuadratureRule:
    """Nodes and weights of an interpolatory rule on a reference interval."""

    nodes: np.ndarray
    weights: np.ndarray
    order: int

    def integrate(self, f) -> float:
        return float(np.dot(self.weights, f(self.nodes)))

    def mapped(self, a: float, b: float) -> tuple[np.ndarray, np.ndarray]:
        """Nodes and weights affinely mapped from [-1, 1] to [a, b]."""
        half = 0.5 * (b - a)
        return a + half * (self.nodes + 1.0), half * self.weights


def log_gamma(x: float) -> float:
    """Natural log of the gamma function for positive real ``x``."""
    if not x > 0:
        raise ValueError(f"log_gamma requires x > 0, got {x!r}")
    return math.lgamma(x)


def laguerre(nu: int, alpha: float, x):
    """Generalized Laguerre polynomial L_nu^alpha(x) by upward recurrence in nu."""
    if nu < 0:
        raise ValueError("nu must be non-negative")
    x = np.asarray(x, dtype=float)
    prev = np.ones_like(x)
    if nu == 0:
        return prev if prev.ndim else float(prev)
    cur = 1.0 + alpha - x
    for k in range(1, nu):
        prev, cur = cur, ((2 * k + 1 + alpha - x) * cur - (k + alpha) * prev) / (k + 1)
    return cur if cur.ndim else float(cur)


def laguerre_derivative(nu: int, alpha: float, x):
    """d/dx L_nu^alpha(x) = -L_{nu-1}^{alpha+1}(x)."""
    if nu == 0:
        x = np.asarray(x, dtype=float)
        z = np.zeros_like(x)
        return z if z.ndim else 0.0
    return -laguerre(nu - 1, alpha + 1.0, x)


def pochhammer(a: float, k: int) -> float:
    """Rising factorial (a)_k."""
    out = 1.0
    for j in range(k):
        out *= a + j
    return out


def hyper3F2_terminating(nu: int, a2: float, a3: float, b1: float, b2: float) -> float:
    """3F2(-nu, a2, a3; b1, b2; 1) as a finite sum of nu + 1 terms.

    Terms are generated by their ratio so no factorials are formed; the
    sum is accumulated with ``math.fsum``.
    """
    if nu < 0:
        raise ValueError("nu must be non-negative")
    terms = [1.0]
    term = 1.0
    for k in range(nu):
        d1, d2 = b1 + k, b2 + k
        if d1 == 0 or d2 == 0:
            raise ValueError(f"zero denominator Pochhammer factor at k={k + 1}")
        term *= (-nu + k) * (a2 + k) * (a3 + k) / (d1 * d2 * (k + 1))
        terms.append(term)
    return math.fsum(terms)


def _legendre_with_derivative(n: int, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    p0, p1 = np.ones_like(x), x.copy()
    for k in range(2, n + 1):
        p0, p1 = p1, ((2 * k - 1) * x * p1 - (k - 1) * p0) / k
    dp = n * (x * p1 - p0) / (x * x - 1.0)
    return p1, dp


def gauss_legendre(order: int) -> QuadratureRule:
    """Gauss-Legendre rule on [-1, 1]; nodes are Newton-refined Legendre roots."""
    if order < 1:
        raise ValueError("order must be >= 1")
    if order == 1:
        return QuadratureRule(np.array([0.0]), np.array([2.0]), 1)
    n = order
    k = np.arange(1, n + 1)
    # Tricomi initial guess, descending order
    x = (1.0 - (n - 1) / (8.0 * n**3)) * np.cos(np.pi * (k - 0.25) / (n + 0.5))
    for _ in range(100):
        p, dp = _legendre_with_derivative(n, x)
        dx = p / dp
        x = x - dx
        if np.max(np.abs(dx)) < 1e-16:
            break
    _, dp = _legendre_with_derivative(n, x)
    w = 2.0 / ((1.0 - x * x) * dp * dp)
    x, w = x[::-1], w[::-1]
    # enforce exact antisymmetry of nodes / symmetry of weights
    x = 0.5 * (x - x[::-1])
    w = 0.5 * (w + w[::-1])
    return QuadratureRule(x, w, order)
