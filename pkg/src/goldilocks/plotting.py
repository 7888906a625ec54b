"""Matplotlib renderings of the CLI tables.  Files only (Agg backend)."""

from __future__ import annotations

import math
from collections import defaultdict
from typing import Sequence

_IRREP_COLORS = {
    "A1": "#1b9e77",
    "A2": "#d95f02",
    "B1": "#7570b3",
    "B2": "#e7298a",
    "E1": "#66a61e",
    "E2": "#e6ab02",
}


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def _save(fig, path: str) -> None:
    # fixed metadata keeps repeated renders byte-identical for png/svg/pdf
    meta = {"Software": None} if str(path).lower().endswith(".png") else None
    fig.savefig(path, dpi=120, bbox_inches="tight", metadata=meta)


def plot_level_curves(rows: Sequence[dict], path: str) -> None:
    """lambda against delta, one line per branch, colored by irrep."""
    plt = _pyplot()
    curves = defaultdict(list)
    for r in rows:
        curves[(r["family"], r["kind"], r["branch"], r["irrep"])].append((r["delta"], r["lambda"]))
    fig, ax = plt.subplots(figsize=(5.0, 4.0))
    seen = set()
    for (fam, kind, branch, irrep), pts in sorted(curves.items()):
        pts.sort()
        label = irrep if irrep not in seen else None
        seen.add(irrep)
        ax.plot([p[0] for p in pts], [p[1] for p in pts], color=_IRREP_COLORS[irrep],
                ls="--" if kind == "flat" else "-", lw=1.2, label=label)
    ax.set_xlim(0.0, math.pi / 2)
    ax.set_xticks([0, math.pi / 8, math.pi / 4, 3 * math.pi / 8, math.pi / 2])
    ax.set_xticklabels(["0", "π/8", "π/4", "3π/8", "π/2"])
    ax.set_xlabel("δ")
    ax.set_ylabel("λ")
    ax.legend(frameon=False, fontsize=8, ncol=2)
    _save(fig, path)
    plt.close(fig)


def plot_wavefunction(rows: Sequence[dict], path: str) -> None:
    plt = _pyplot()
    samples = [r for r in rows if r["line"] == 0]
    phi = [r["phi"] for r in samples]
    fig, ax = plt.subplots(figsize=(5.0, 3.2))
    ax.plot(phi, [r["re_phi"] for r in samples], label="Re Φ")
    ax.plot(phi, [r["im_phi"] for r in samples], label="Im Φ")
    for n in range(1, 7):
        ax.axvline((2 * n - 1) * math.pi / 6, color="0.8", lw=0.6, zorder=0)
    ax.set_xlabel("φ")
    ax.legend(frameon=False, fontsize=8)
    _save(fig, path)
    plt.close(fig)


def plot_ground_energy_study(rows: Sequence[dict], path: str) -> None:
    """E0 against 1 / basis size, with the extrapolated value as a marker."""
    plt = _pyplot()
    cut = [r for r in rows if r["row_type"] == "cutoff"]
    ext = [r for r in rows if r["row_type"] == "extrapolation"]
    fig, ax = plt.subplots(figsize=(4.5, 3.2))
    ax.plot([1.0 / r["basis_size"] for r in cut], [r["e0"] for r in cut], "o-")
    if ext:
        ax.axhline(ext[0]["e0"], color="0.5", ls=":", label="extrapolated")
        ax.legend(frameon=False, fontsize=8)
    ax.set_xlabel("1 / basis size")
    ax.set_ylabel("E₀")
    _save(fig, path)
    plt.close(fig)
