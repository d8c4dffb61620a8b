"""Command-line front end: ``python -m fermictx <command>``."""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from typing import Optional, Sequence

import numpy as np

from . import verify as verify_mod
from .complementarity import ModeGrid, definite_momentum_state, position_basis_report
from .errors import DomainError, FermiCtxError
from .fock import (DensityState, FermionState, dicke_state, make_single_fermion_state,
                   random_density_state, w_state)
from .inequalities import (InequalityReport, chsh_analytic_optimum, chsh_value,
                           inequality_value, nchv_bound, pm_square_value)
from .io import load_state
from .settings_opt import OptimizerConfig, certify_local_max, grid_search, optimize

DEFAULT_SEED = 42
# command-line amplitudes are typed with limited digits
CLI_NORM_TOL = 1e-6


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# output

def _fmt(x) -> str:
    if isinstance(x, bool):
        return "yes" if x else "no"
    if isinstance(x, float):
        return f"{x:.9g}"
    return str(x)


def _rows_output(rows: list, columns: list, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(rows, indent=2, sort_keys=True)
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=columns, extrasaction="ignore", lineterminator="\n")
        writer.writeheader()
        for r in rows:
            writer.writerow({k: repr(v) if isinstance(v, float) else v for k, v in r.items()})
        return buf.getvalue().rstrip("\n")
    table = [[_fmt(r[c]) for c in columns] for r in rows]
    widths = [max(len(c), *(len(t[i]) for t in table)) if table else len(c)
              for i, c in enumerate(columns)]
    lines = ["  ".join(c.ljust(w) for c, w in zip(columns, widths))]
    lines += ["  ".join(v.ljust(w) for v, w in zip(t, widths)) for t in table]
    return "\n".join(line.rstrip() for line in lines)


def _report_output(report: InequalityReport, fmt: str) -> str:
    if fmt == "json":
        return report.to_json()
    if fmt == "csv":
        d = report.to_dict()
        row = {k: d[k] for k in ("name", "state_label", "quantum_value", "nc_bound",
                                 "margin", "violation")}
        row["settings"] = json.dumps(d["settings"], sort_keys=True)
        row["notes"] = json.dumps(d["notes"], sort_keys=True)
        return _rows_output([row], list(row), "csv")
    return report.to_text()


def _emit(text: str, args) -> None:
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text + "\n")
    else:
        sys.stdout.write(text + "\n")


def _config(args) -> OptimizerConfig:
    return OptimizerConfig(restarts=args.restarts, max_sweeps=args.max_sweeps,
                           tolerance=args.tolerance, seed=args.seed,
                           grid_resolution=args.grid_resolution)


# ---------------------------------------------------------------------------
# commands

def cmd_verify(args) -> int:
    checks = verify_mod.run(args.scope, seed=args.seed)
    rows = [{"suite": c.suite, "invariant": c.name, "max_error": float(c.max_error),
             "threshold": float(c.threshold), "status": "pass" if c.passed else "FAIL"}
            for c in checks]
    if args.scope in ("all", "inequalities"):
        rows.extend({"suite": "inequalities", "invariant": f"nchv bound {name}{'' if M is None else f' M={M}'}",
                     "max_error": float(nchv_bound(name, M)), "threshold": float("nan"),
                     "status": "info"}
                    for name, M in [("chsh", None), ("hardy", 2), ("hardy", 3),
                                    ("hardy", 4), ("hardy", 5), ("pm", None)])
    _emit(_rows_output(rows, ["suite", "invariant", "max_error", "threshold", "status"],
                       args.format), args)
    failed = [c for c in checks if not c.passed]
    for c in failed:
        print(f"invariant failed: [{c.suite}] {c.name}: {c.max_error:.3e} >= {c.threshold:.1e}",
              file=sys.stderr)
    return 1 if failed else 0


def _chsh_row(g1: float, g2: float, config: OptimizerConfig, renormalized: bool) -> dict:
    state = make_single_fermion_state([g1, g2], label=f"g=({g1:.9g},{g2:.9g})")
    settings, predicted = chsh_analytic_optimum(g1, g2)
    at_analytic = chsh_value(state, settings)
    best = optimize(state, "chsh", config)
    return {
        "g1_sq": g1 * g1,
        "g1": g1,
        "g2": g2,
        "analytic_value": predicted,
        "analytic_settings_value": at_analytic,
        "optimizer_value": best.value,
        "margin": best.value - 2.0,
        "theta2_rad": settings.unprimed[1].theta,
        "theta2_deg": math.degrees(settings.unprimed[1].theta),
        "analytic_local_max": certify_local_max(state, "chsh", settings),
        "input_renormalized": renormalized,
        "optimizer_settings": best.settings.to_records(),
    }


CHSH_COLUMNS = ["g1_sq", "analytic_value", "analytic_settings_value", "optimizer_value",
                "margin", "theta2_deg", "analytic_local_max"]


def cmd_chsh(args) -> int:
    config = _config(args)
    if args.scan is not None:
        if args.scan < 2:
            raise UsageError("--scan needs at least 2 points")
        rows = []
        for g1sq in np.linspace(0.0, 1.0, args.scan):
            rows.append(_chsh_row(math.sqrt(g1sq), math.sqrt(1.0 - g1sq), config, False))
    else:
        if args.g1 is None or args.g2 is None:
            raise UsageError("give --g1 and --g2, or --scan N")
        norm = math.hypot(args.g1, args.g2)
        if abs(norm * norm - 1) > CLI_NORM_TOL:
            raise DomainError(f"g1^2 + g2^2 = {norm * norm!r}, expected 1")
        renormalized = norm != 1.0
        rows = [_chsh_row(args.g1 / norm, args.g2 / norm, config, renormalized)]
    _emit(_rows_output(rows, CHSH_COLUMNS, args.format), args)
    return 0


def _resolve_state(spec: str, modes: Optional[int], excitations: Optional[int]):
    if spec.startswith("file:"):
        return load_state(spec[len("file:"):])
    kind = spec.lower()
    if kind == "w":
        if modes is None:
            raise UsageError("--modes is required for the W state")
        return w_state(modes)
    if kind == "dicke":
        if modes is None or excitations is None:
            raise UsageError("--modes and --excitations are required for the Dicke state")
        return dicke_state(modes, excitations)
    raise UsageError(f"unknown state {spec!r}; use W, dicke or file:PATH")


def cmd_hardy(args) -> int:
    state = _resolve_state(args.state, args.modes, args.excitations)
    config = _config(args)
    best = optimize(state, "hardy", config)
    dense = inequality_value("hardy", state, best.settings)
    notes = {
        "dense_check_value": dense,
        "grid_oracle_value": grid_search(state, "hardy", config.grid_resolution).value,
        "optimizer_restart": best.restart,
        "seed": config.seed,
    }
    report = InequalityReport("hardy", best.value, nchv_bound("hardy", state.mode_count),
                              best.settings.to_records(), state.label, notes)
    _emit(_report_output(report, args.format), args)
    return 0


def cmd_pm(args) -> int:
    if args.classical:
        report = InequalityReport("pm-classical", float(nchv_bound("pm")), 4.0, None,
                                  "deterministic assignments",
                                  {"assignments": 512})
        _emit(_report_output(report, args.format), args)
        return 0
    if args.state is not None:
        if not args.state.startswith("file:"):
            raise UsageError("--state takes file:PATH")
        state = load_state(args.state[len("file:"):])
        if isinstance(state, FermionState):
            state = DensityState.from_pure(state)
    elif args.maximally_mixed:
        state = DensityState.maximally_mixed(2)
    else:
        state = random_density_state(2, np.random.default_rng(args.seed),
                                     label=f"random mixed (seed {args.seed})")
    report = InequalityReport("pm", pm_square_value(state), float(nchv_bound("pm")),
                              None, state.label, {"grid": "n=z, n'=x, n''=y"})
    _emit(_report_output(report, args.format), args)
    return 0


def cmd_complementarity(args) -> int:
    try:
        grid = ModeGrid(args.modes, args.length)
    except DomainError as exc:
        raise UsageError(str(exc)) from exc
    state = definite_momentum_state(args.k_index, grid)
    report = position_basis_report(state, grid, _config(args))
    _emit(_report_output(report, args.format), args)
    return 0


# ---------------------------------------------------------------------------
# parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("table", "json", "csv"), default="table")
    common.add_argument("--output", help="write to this file instead of stdout")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)

    opt = argparse.ArgumentParser(add_help=False)
    defaults = OptimizerConfig()
    opt.add_argument("--restarts", type=int, default=defaults.restarts)
    opt.add_argument("--max-sweeps", type=int, default=defaults.max_sweeps)
    opt.add_argument("--tolerance", type=float, default=defaults.tolerance)
    opt.add_argument("--grid-resolution", type=int, default=defaults.grid_resolution)

    parser = argparse.ArgumentParser(
        prog="fermictx",
        description="Contextuality of fermions in Fock space: CHSH, Hardy and Peres-Mermin tests.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", parents=[common], help="run invariant suites")
    p.add_argument("scope", nargs="?", default="all", choices=("all",) + verify_mod.SCOPES)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("chsh", parents=[common, opt], help="single fermion in two modes")
    p.add_argument("--g1", type=float)
    p.add_argument("--g2", type=float)
    p.add_argument("--scan", type=int, metavar="N", help="scan g1^2 over N points in [0, 1]")
    p.set_defaults(func=cmd_chsh)

    p = sub.add_parser("hardy", parents=[common, opt], help="Hardy inequality over M modes")
    p.add_argument("--state", required=True, help="W, dicke or file:PATH")
    p.add_argument("--modes", type=int)
    p.add_argument("--excitations", type=int)
    p.set_defaults(func=cmd_hardy)

    p = sub.add_parser("pm", parents=[common], help="Peres-Mermin square for M = 2")
    src = p.add_mutually_exclusive_group()
    src.add_argument("--state", help="file:PATH with a pure state or mixture")
    src.add_argument("--maximally-mixed", action="store_true")
    src.add_argument("--classical", action="store_true",
                     help="maximize over deterministic noncontextual assignments")
    p.set_defaults(func=cmd_pm)

    p = sub.add_parser("complementarity", parents=[common, opt],
                       help="definite-momentum fermion tested in the position basis")
    p.add_argument("--k-index", type=int, default=1)
    p.add_argument("--modes", type=int, required=True)
    p.add_argument("--length", type=float, default=1.0)
    p.set_defaults(func=cmd_complementarity)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.error(str(exc))
    except FermiCtxError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
