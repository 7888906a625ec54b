import math

import numpy as np
import pytest

from goldilocks.angular import UNITARY, Coupling, find_root


def sample_roots(n: int, seed: int = 0):
    """Deterministic (root, coupling) pairs across families, kinds and couplings."""
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < n:
        fam = int(rng.integers(0, 4))
        kind = "flat" if fam in (0, 3) and rng.random() < 0.25 else "moving"
        branch = int(rng.integers(0, 4))
        u = rng.random()
        if u < 0.05:
            delta = 0.0
        elif u < 0.1:
            delta = UNITARY
        else:
            delta = float(rng.uniform(0.0, UNITARY))
        if kind == "moving" and fam == 0 and branch == 0 and delta == 0.0:
            delta = 1e-3
        c = Coupling(delta)
        out.append((find_root(fam, branch, kind, c), c))
    return out


def sector_quadrature(order: int = 64):
    """Nodes and weights on [-pi/6, 11 pi/6] with one Gauss-Legendre panel per sector."""
    x, w = np.polynomial.legendre.leggauss(order)
    nodes, weights = [], []
    for k in range(6):
        a = -math.pi / 6 + k * math.pi / 3
        nodes.append(a + (x + 1) * math.pi / 6)
        weights.append(w * math.pi / 6)
    return np.concatenate(nodes), np.concatenate(weights)


@pytest.fixture(scope="session")
def angular_rule():
    return sector_quadrature()
