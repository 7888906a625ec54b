"""Command-line interface: deterministic CSV / JSON tables for every solver.

Exit codes: 0 success, 2 usage error, 3 numerical-invariant violation.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Any, Callable, Iterator, Sequence

import numpy as np

from . import __version__
from .angular import UNITARY, Coupling, build_wavefunction, find_root, line_residuals, roots
from .contact_ed import FIT_MODELS, ground_energy_study, matched_delta
from .perturb import SECTOR_FAMILY
from .radial import (
    RadialState,
    W_series,
    apply_W_operator,
    casimir_eigenvalue,
    hamiltonian_series,
    ladder_up,
    radial_eval,
    radial_series,
)
from .spectrum import (
    STATISTICS,
    enumerate_spectrum,
    slope_numeric,
    slope_unitary,
    slope_weak,
)

SCHEMA_VERSION = "1"
EXIT_OK, EXIT_USAGE, EXIT_INVARIANT = 0, 2, 3
THREADS_ENV = "GOLDILOCKS_THREADS"
# a decimal literal for pi/2 with 8 significant digits lands within this of the limit
UNITARY_SNAP = 5e-8


class UsageError(Exception):
    pass


@dataclass
class Table:
    command: str
    parameters: dict[str, Any]
    columns: list[str]
    rows: list[dict[str, Any]] = field(default_factory=list)
    violations: list[str] = field(default_factory=list)


# ---------------------------------------------------------------- parsing


def parse_delta(text: str) -> float:
    """Radians in [0, pi/2]; 'unitary' is exactly pi/2."""
    if text.strip().lower() == "unitary":
        return UNITARY
    try:
        d = float(text)
    except ValueError:
        raise UsageError(f"delta must be a number in radians or 'unitary', got {text!r}") from None
    if not math.isfinite(d) or d < 0.0 or d > UNITARY + UNITARY_SNAP:
        raise UsageError(f"delta {text} outside [0, pi/2]")
    if abs(d - UNITARY) <= UNITARY_SNAP:
        return UNITARY
    return d


def parse_grid(text: str) -> list[float]:
    parts = text.split(":")
    if len(parts) != 3:
        raise UsageError(f"grid must be 'start:stop:count', got {text!r}")
    start, stop = parse_delta(parts[0]), parse_delta(parts[1])
    try:
        count = int(parts[2])
    except ValueError:
        raise UsageError(f"grid count must be an integer, got {parts[2]!r}") from None
    if count < 2 or stop < start:
        raise UsageError("grid needs count >= 2 and start <= stop")
    grid = [float(x) for x in np.linspace(start, stop, count)]
    grid[-1] = stop
    return grid


def parse_float_list(text: str) -> list[float]:
    try:
        vals = [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise UsageError(f"expected a comma-separated list of numbers, got {text!r}") from None
    if not vals:
        raise UsageError("empty list")
    return vals


def thread_count() -> int:
    raw = os.environ.get(THREADS_ENV, "1")
    try:
        n = int(raw)
    except ValueError:
        raise UsageError(f"{THREADS_ENV} must be a positive integer, got {raw!r}") from None
    if n < 1:
        raise UsageError(f"{THREADS_ENV} must be a positive integer, got {raw!r}")
    return n


@contextmanager
def mapper() -> Iterator[Callable]:
    """Order-preserving map, threaded when the environment asks for it."""
    n = thread_count()
    if n == 1:
        yield map
        return
    with ThreadPoolExecutor(max_workers=n) as pool:
        yield pool.map


# ---------------------------------------------------------------- output


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        v = float(v)
        return "" if math.isnan(v) else "%.17g" % v
    return str(v)


def _json_value(v) -> str:
    if v is None:
        return "null"
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        v = float(v)
        if not math.isfinite(v):
            return "null"
        return "%.17g" % v
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(_json_value(x) for x in v) + "]"
    if isinstance(v, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {_json_value(x)}" for k, x in v.items()) + "}"
    return json.dumps(str(v))


def render_csv(table: Table) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(table.columns)
    for row in table.rows:
        w.writerow([_cell(row.get(c)) for c in table.columns])
    return buf.getvalue()


def render_json(table: Table) -> str:
    lines = [
        "{",
        f'  "schema_version": {json.dumps(SCHEMA_VERSION)},',
        f'  "command": {json.dumps(table.command)},',
        f'  "version": {json.dumps(__version__)},',
        f'  "parameters": {_json_value(table.parameters)},',
        f'  "columns": {_json_value(table.columns)},',
        '  "rows": [',
    ]
    body = [
        "    {" + ", ".join(f"{json.dumps(c)}: {_json_value(r.get(c))}" for c in table.columns) + "}"
        for r in table.rows
    ]
    lines.append(",\n".join(body))
    lines += ["  ]", "}"]
    return "\n".join(x for x in lines if x) + "\n"


# ---------------------------------------------------------------- commands


def _free_m(root) -> int:
    return int(root.bracket[0]) if root.kind == "moving" else int(round(root.lam))


def cmd_spectrum(args) -> Table:
    delta = parse_delta(args.delta)
    if args.emax < 1:
        raise UsageError("--emax must be >= 1")
    table = enumerate_spectrum(Coupling(delta), args.emax, args.stats, args.include_cm)
    cols = ["family", "branch", "kind", "irrep", "m", "lambda", "nu"]
    cols += ["n"] if args.include_cm else []
    cols += ["energy", "multiplicity"]
    out = Table("spectrum", {"delta": delta, "emax": args.emax, "stats": args.stats, "include_cm": args.include_cm}, cols)
    for rec in table:
        r = rec.root
        row = dict(family=r.m_bar, branch=r.branch, kind=r.kind, irrep=str(r.irrep), m=_free_m(r),
                   nu=rec.nu, energy=rec.energy, multiplicity=rec.multiplicity)
        row["lambda"] = r.lam
        if args.include_cm:
            row["n"] = rec.cm_n
        out.rows.append(row)
    energies = [row["energy"] for row in out.rows]
    if any(b < a for a, b in zip(energies, energies[1:])):
        out.violations.append("spectrum energies are not sorted")
    return out


def _branch_curve(key, grid):
    fam, branch, kind = key
    return [find_root(fam, branch, kind, Coupling(d)) for d in grid]


def cmd_levels(args) -> Table:
    grid = parse_grid(args.delta_grid)
    if not args.lambda_max > 0:
        raise UsageError("--lambda-max must be positive")
    # every branch that is below lambda_max somewhere on [0, pi/2] starts below it
    keys = [(fam, r.branch, r.kind) for fam in range(4) for r in roots(fam, args.lambda_max, Coupling(0.0))]
    keys.sort(key=lambda k: (k[0], k[2], k[1]))
    with mapper() as pmap:
        curves = list(pmap(lambda k: _branch_curve(k, grid), keys))
    cols = ["family", "branch", "kind", "irrep", "m", "delta", "lambda"]
    out = Table("levels", {"delta_grid": args.delta_grid, "lambda_max": args.lambda_max}, cols)
    for key, curve in zip(keys, curves):
        m = _free_m(curve[0]) if curve[0].kind == "flat" else int(curve[0].bracket[0])
        lams = [r.lam for r in curve]
        for d, r in zip(grid, curve):
            row = dict(family=key[0], branch=key[1], kind=key[2], irrep=str(r.irrep), m=m, delta=d)
            row["lambda"] = r.lam
            out.rows.append(row)
        if key[2] == "flat" and max(lams) - min(lams) > 0:
            out.violations.append(f"flat branch {key} moves with delta")
        if any(b < a - 1e-12 for a, b in zip(lams, lams[1:])):
            out.violations.append(f"moving branch {key} decreases with delta")
    if args.plot:
        from .plotting import plot_level_curves

        plot_level_curves(out.rows, args.plot)
    return out


def _resolve_root(args, delta):
    try:
        return find_root(args.family, args.branch, args.kind, Coupling(delta))
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_wavefunction(args) -> Table:
    delta = parse_delta(args.delta)
    if args.samples < 2:
        raise UsageError("--samples must be >= 2")
    if args.family not in range(4):
        raise UsageError("--family must be 0, 1, 2 or 3")
    root = _resolve_root(args, delta)
    wf = build_wavefunction(root, Coupling(delta), args.m_sign)
    cols = ["line", "phi", "re_phi", "im_phi", "continuity_residual", "kink_residual"]
    params = dict(family=args.family, branch=args.branch, kind=args.kind, delta=delta,
                  m_sign=args.m_sign, samples=args.samples, **{"lambda": root.lam})
    out = Table("wavefunction", params, cols)
    phi = np.linspace(0.0, 2 * math.pi, args.samples)
    vals = wf(phi)
    for p, v in zip(phi, vals):
        out.rows.append(dict(line=0, phi=float(p), re_phi=float(v.real), im_phi=float(v.imag)))
    cont, kres = line_residuals(wf, Coupling(delta))
    for n in range(1, 7):
        lo, hi, _, _ = wf.line_values(n)
        mid = 0.5 * (lo + hi)
        out.rows.append(dict(line=n, phi=(2 * n - 1) * math.pi / 6, re_phi=float(mid.real), im_phi=float(mid.imag),
                             continuity_residual=float(cont[n - 1]), kink_residual=float(kres[n - 1])))
        if cont[n - 1] > 1e-10:
            out.violations.append(f"continuity residual {cont[n - 1]:.3g} at line {n}")
        if kres[n - 1] > 1e-8:
            out.violations.append(f"kink residual {kres[n - 1]:.3g} at line {n}")
    if args.plot:
        from .plotting import plot_wavefunction

        plot_wavefunction(out.rows, args.plot)
    return out


def _diff_row(base: dict, analytic: float, numeric: float, tol: float) -> dict:
    ad = abs(numeric - analytic)
    rd = ad / abs(analytic) if analytic != 0 else ad
    return dict(base, analytic=analytic, numeric=numeric, abs_diff=ad, rel_diff=rd, tolerance=tol, ok=rd <= tol)


def cmd_slopes(args) -> Table:
    weak = args.regime == "weak"
    delta = parse_delta(args.delta) if args.delta is not None else (1e-6 if weak else UNITARY - 1e-6)
    step = args.step if args.step is not None else 1e-7
    tol = args.tol if args.tol is not None else (1e-4 if weak else 1e-3)
    if args.lambda_max <= 0:
        raise UsageError("--lambda-max must be positive")
    if step < 1e-12:
        raise UsageError("--step below 1e-12 is dominated by round-off")
    if not (0 < delta - step and delta + step < UNITARY):
        raise UsageError("delta +/- step must lie strictly inside (0, pi/2)")
    cols = ["family", "branch", "kind", "irrep", "m", "lambda_limit", "quantity", "delta",
            "analytic", "numeric", "abs_diff", "rel_diff", "tolerance", "ok"]
    out = Table("slopes", {"regime": args.regime, "delta": delta, "step": step, "lambda_max": args.lambda_max, "tol": tol}, cols)
    limit = Coupling(0.0 if weak else UNITARY)
    keys = []
    for fam in range(4):
        for r in roots(fam, args.lambda_max + (0 if weak else 3), Coupling(0.0)):
            limit_root = find_root(fam, r.branch, r.kind, limit)
            if limit_root.lam <= args.lambda_max + 1e-9:
                keys.append((fam, r.branch, r.kind, limit_root))
    keys.sort(key=lambda k: (k[0], k[2], k[1]))
    for fam, branch, kind, lroot in keys:
        lam_lim = lroot.lam if kind == "flat" or not weak else float(lroot.bracket[0])
        if not weak:
            lam_lim = float(round(lroot.lam))
        base = dict(family=fam, branch=branch, kind=kind, irrep=str(lroot.irrep), m=_free_m(lroot),
                    lambda_limit=lam_lim, delta=delta)
        if weak:
            ws = slope_weak(lroot)
            if ws.divergent:
                lam = find_root(fam, branch, kind, Coupling(delta)).lam
                row = _diff_row(dict(base, quantity="lambda_over_sqrt_asymptote"), 1.0, lam / ws.asymptote(delta), 1e-2)
            else:
                num = slope_numeric(fam, branch, kind, delta, step)
                row = _diff_row(dict(base, quantity="slope"), ws.value, num, tol)
        else:
            num = slope_numeric(fam, branch, kind, delta, step)
            row = _diff_row(dict(base, quantity="slope"), slope_unitary(lroot), num, tol)
        out.rows.append(row)
        if not row["ok"]:
            out.violations.append(f"{row['quantity']} mismatch on branch {(fam, branch, kind)}: rel diff {row['rel_diff']:.3g}")
    return out


def _ladder_rows(nu: int, lam: float, rho: np.ndarray) -> list[dict]:
    state = RadialState(nu, lam)
    base = dict(nu=nu)
    base["lambda"] = lam
    rows = []
    if nu == 0:
        res = float(np.max(np.abs(apply_W_operator(-1, state, rho))))
        rows.append(_diff_row(dict(base, check="W_minus_annihilates"), 0.0, res, 1e-10))
    coef, up = ladder_up(state)
    res = float(np.max(np.abs(apply_W_operator(1, state, rho) - coef * radial_eval(up, rho))))
    rows.append(_diff_row(dict(base, check="W_plus_raises"), 0.0, res, 1e-8))
    rows.append(_diff_row(dict(base, check="casimir"), lam * lam - 1.0, casimir_eigenvalue(state), 1e-12))
    # commutators with H acting as a differential operator on the exact series
    f = radial_series(state)
    H = lambda s: hamiltonian_series(s, lam)  # noqa: E731
    W = lambda sign, s: W_series(sign, s, lam)  # noqa: E731
    scale = float(np.max(np.abs(f(rho))))
    for sign, name in ((1, "commutator_H_W_plus"), (-1, "commutator_H_W_minus")):
        comm = H(W(sign, f)) - W(sign, H(f)) - W(sign, f).scale(2.0 * sign)
        rows.append(_diff_row(dict(base, check=name), 0.0, float(np.max(np.abs(comm(rho)))) / scale, 1e-10))
    comm = W(-1, W(1, f)) - W(1, W(-1, f)) - H(f)
    rows.append(_diff_row(dict(base, check="commutator_W_minus_W_plus"), 0.0, float(np.max(np.abs(comm(rho)))) / scale, 1e-10))
    return rows


def cmd_ladder_check(args) -> Table:
    lams = parse_float_list(args.lambdas)
    if any(lam < 0 for lam in lams) or args.nu_max < 0:
        raise UsageError("lambda values and --nu-max must be non-negative")
    rho = np.linspace(0.0, args.rho_max, 401)
    cols = ["check", "nu", "lambda", "analytic", "numeric", "abs_diff", "rel_diff", "tolerance", "ok"]
    out = Table("ladder-check", {"nu_max": args.nu_max, "lambdas": lams, "rho_max": args.rho_max}, cols)
    for lam in lams:
        for nu in range(args.nu_max + 1):
            out.rows.extend(_ladder_rows(nu, lam, rho))
    for row in out.rows:
        if not row["ok"]:
            out.violations.append(f"{row['check']} failed at nu={row['nu']}, lambda={row['lambda']}")
    return out


def cmd_contact_ed(args) -> Table:
    cutoffs = parse_float_list(args.emax)
    if any(b < a for a, b in zip(cutoffs, cutoffs[1:])) or cutoffs[0] < 1:
        raise UsageError("--emax must be an ascending list of cutoffs >= 1")
    if args.g < 0:
        raise UsageError("--g must be non-negative")
    irrep = args.sector.partition(":")[0]
    if irrep not in SECTOR_FAMILY:
        raise UsageError(f"unknown sector {args.sector!r}")
    delta_b = None
    if args.basis == "goldilocks":
        delta_b = matched_delta(args.g) if args.delta_b == "matched" else parse_delta(args.delta_b)
        if not 0.0 < delta_b < UNITARY:
            raise UsageError("goldilocks basis needs 0 < delta_b < pi/2")
    try:
        with mapper() as pmap:
            study = ground_energy_study(args.g, args.sector, args.basis, cutoffs, delta_b,
                                        args.quadrature_order, args.fit, map_fn=pmap)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    cols = ["row_type", "e_max", "basis_size", "e0", "change", "fit_model", "fit_residual"]
    params = dict(g=args.g, sector=args.sector, basis=args.basis, delta_b=study.delta_b,
                  emax=cutoffs, fit=args.fit, quadrature_order=args.quadrature_order)
    out = Table("contact-ed", params, cols)
    prev = None
    for r in study.rows:
        out.rows.append(dict(row_type="cutoff", e_max=r.e_max, basis_size=r.basis_size, e0=r.e0,
                             change=None if prev is None else r.e0 - prev))
        prev = r.e0
    out.rows.append(dict(row_type="extrapolation", e0=study.extrapolated, fit_model=study.fit_model,
                         fit_residual=study.fit_residual))
    if not study.monotone:
        out.violations.append("ground energy increases with basis cutoff")
    if args.plot:
        from .plotting import plot_ground_energy_study

        plot_ground_energy_study(out.rows, args.plot)
    return out


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="goldilocks", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, plot=False):
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--output", "-o", help="write the table here instead of stdout")
        if plot:
            p.add_argument("--plot", metavar="PATH", help="also render a figure to PATH")
        return p

    p = common(sub.add_parser("spectrum", help="all states up to an energy cutoff"))
    p.add_argument("--delta", default="0", help="coupling phase in radians, or 'unitary'")
    p.add_argument("--emax", type=float, default=5.0)
    p.add_argument("--stats", choices=sorted(STATISTICS), default="distinguishable")
    p.add_argument("--include-cm", action="store_true", help="add center-of-mass excitations")
    p.set_defaults(func=cmd_spectrum)

    p = common(sub.add_parser("levels", help="lambda(delta) for every branch"), plot=True)
    p.add_argument("--delta-grid", default="0:unitary:33", help="start:stop:count")
    p.add_argument("--lambda-max", type=float, default=9.0)
    p.set_defaults(func=cmd_levels)

    p = common(sub.add_parser("wavefunction", help="sampled angular wave function"), plot=True)
    p.add_argument("--family", type=int, default=0)
    p.add_argument("--branch", type=int, default=0)
    p.add_argument("--kind", choices=("moving", "flat"), default="moving")
    p.add_argument("--delta", default="0")
    p.add_argument("--m-sign", type=int, choices=(1, -1), default=1)
    p.add_argument("--samples", type=int, default=241)
    p.set_defaults(func=cmd_wavefunction)

    p = common(sub.add_parser("slopes", help="analytic vs finite-difference dE/d delta"))
    p.add_argument("--regime", choices=("weak", "unitary"), required=True)
    p.add_argument("--delta", default=None, help="evaluation point (default 1e-6 or pi/2 - 1e-6)")
    p.add_argument("--step", type=float, default=None)
    p.add_argument("--lambda-max", type=float, default=6.0)
    p.add_argument("--tol", type=float, default=None)
    p.set_defaults(func=cmd_slopes)

    p = common(sub.add_parser("ladder-check", help="residuals of the radial ladder algebra"))
    p.add_argument("--nu-max", type=int, default=5)
    p.add_argument("--lambdas", default="0,3,4.7")
    p.add_argument("--rho-max", type=float, default=8.0)
    p.set_defaults(func=cmd_ladder_check)

    p = common(sub.add_parser("contact-ed", help="contact-model ground energy against basis cutoff"), plot=True)
    p.add_argument("--g", type=float, required=True)
    p.add_argument("--sector", default="A1")
    p.add_argument("--basis", choices=("harmonic", "goldilocks"), default="harmonic")
    p.add_argument("--delta-b", default="matched", help="reference phase, or 'matched' for 2 tan(delta_b) = g")
    p.add_argument("--emax", default="10,20,30", help="ascending comma-separated cutoffs")
    p.add_argument("--fit", choices=FIT_MODELS, default="inverse_size")
    p.add_argument("--quadrature-order", type=int, default=200)
    p.set_defaults(func=cmd_contact_ed)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        table = args.func(args)
    except UsageError as exc:
        print(f"goldilocks {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    text = render_json(table) if args.format == "json" else render_csv(table)
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    for msg in table.violations:
        print(f"goldilocks {args.command}: invariant violated: {msg}", file=sys.stderr)
    return EXIT_INVARIANT if table.violations else EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
