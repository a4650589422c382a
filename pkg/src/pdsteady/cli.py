"""Command-line interface: ``pdsteady <subcommand> [options]``.

Subcommands
-----------
solve           profiles.csv and summary.json for one case
flux            closed-form q_U and j_U sampled on a grid
steady-constant constant steady state (C_G*, C_A*, P*)
sweep           one-parameter sweep, sweep.csv with one row per value
residual-check  steady residuals at N and 2N
bessel-table    I0, I1, K0, K1 on a grid

Exit status is 0 on success, 1 on solver or output failures and 2 on
configuration or parameter errors. Diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import logging
import sys
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import __version__
from .bessel import BesselDomainError, BesselOverflowError, bessel_table
from .bvp import BvpSolveError
from .config import ConfigError, load_config
from .flux import constant_steady_state, flux_profile
from .output import (
    NonFiniteOutputError,
    columns_csv_text,
    csv_text,
    json_text,
    profile_columns,
    write_text,
)
from .params import FIELDS, ParameterError, ParameterSet, RestrictionError, validate_parameters
from .profiles import (
    CASES,
    DEFAULT_N,
    LINEAR_NU_FORMS,
    NegativeAlbuminWarning,
    solve_profiles,
    steady_residual_check,
    summarize,
)

log = logging.getLogger("pdsteady")

SUBCOMMANDS = ("solve", "flux", "steady-constant", "sweep", "residual-check", "bessel-table")
SWEEP_COLUMNS = (
    "parameter",
    "value",
    "status",
    "outflow_signed",
    "outflow_magnitude",
    "min_w",
    "penetration_depth",
    "negative_w",
    "message",
)

INPUT_ERRORS = (ConfigError, ParameterError, RestrictionError)
SOLVER_ERRORS = (BvpSolveError, BesselDomainError, BesselOverflowError, NonFiniteOutputError, FloatingPointError)


@dataclass(frozen=True)
class SweepDescriptor:
    parameter: str
    values: tuple

    def __post_init__(self):
        if self.parameter not in FIELDS:
            raise ConfigError(f"sweep parameter {self.parameter!r} is not a parameter field")
        if not self.values:
            raise ConfigError("sweep needs at least one value")


@dataclass(frozen=True)
class RunSpec:
    subcommand: str
    case: str = "constant-nu"
    config: Optional[str] = None
    overrides: tuple = ()
    N: int = DEFAULT_N
    out: Optional[Path] = None
    nu_m: Optional[float] = None
    linear_nu_form: str = "derived"
    sweep: Optional[SweepDescriptor] = None
    jobs: int = 1
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.subcommand not in SUBCOMMANDS:
            raise ConfigError(f"unknown subcommand {self.subcommand!r}")
        if self.case not in CASES:
            raise ConfigError(f"unknown case {self.case!r}")

    def parameters(self) -> ParameterSet:
        return load_config(self.config, self.overrides)


def _report_warnings(solution, prefix=""):
    for message in solution.warnings:
        log.warning("%s%s", prefix, message)


def solve_summary(params: ParameterSet, spec: RunSpec):
    solution = solve_profiles(params, spec.case, spec.N, spec.nu_m, spec.linear_nu_form)
    return solution, summarize(solution, steady_residual_check(solution))


def run_solve(spec: RunSpec) -> int:
    params = spec.parameters()
    solution, summary = solve_summary(params, spec)
    _report_warnings(solution)
    summary["parameters"] = params.as_dict()
    out = Path(spec.out or ".")
    # render both before writing either, so a failure leaves no partial artifacts
    profiles = columns_csv_text(profile_columns(solution))
    summary_text = json_text(summary)
    write_text(out / "profiles.csv", profiles)
    write_text(out / "summary.json", summary_text)
    log.info("outflow %.6g mL/min, wrote %s", summary["outflow_signed"], out)
    return 0


def _sweep_point(base: ParameterSet, spec: RunSpec, value: float) -> list:
    name = spec.sweep.parameter
    try:
        params = validate_parameters(base.replace(**{name: value}))
        solution, summary = solve_summary(params, spec)
        row = [
            name,
            value,
            "ok",
            summary["outflow_signed"],
            summary["outflow_magnitude"],
            summary["min_w"],
            summary["penetration_depth"],
            bool(solution.warnings),
            "; ".join(solution.warnings),
        ]
        csv_text(SWEEP_COLUMNS, [row])  # reject non-finite numbers in-row
        return row
    except (ValueError, ArithmeticError, RuntimeError) as exc:
        return [name, value, "error", None, None, None, None, None, f"{type(exc).__name__}: {exc}"]


def sweep_rows(base: ParameterSet, spec: RunSpec) -> list:
    """One row per sweep value, in descriptor order regardless of ``jobs``."""
    name = spec.sweep.parameter
    values = spec.sweep.values
    for endpoint in {values[0], values[-1]}:
        validate_parameters(base.replace(**{name: endpoint}))
    if spec.jobs > 1 and len(values) > 1:
        with ThreadPoolExecutor(max_workers=spec.jobs) as pool:
            return list(pool.map(lambda v: _sweep_point(base, spec, v), values))
    return [_sweep_point(base, spec, v) for v in values]


def run_sweep(spec: RunSpec) -> int:
    rows = sweep_rows(spec.parameters(), spec)
    for row in rows:
        if row[2] == "error":
            log.warning("%s=%r failed: %s", row[0], row[1], row[-1])
        elif row[7]:
            log.warning("%s=%r: %s", row[0], row[1], row[-1])
    write_text(Path(spec.out or ".") / "sweep.csv", csv_text(SWEEP_COLUMNS, rows))
    return 0


def _emit(text: str, out: Optional[Path]):
    if out is None:
        sys.stdout.write(text)
    else:
        write_text(out, text)


def run_flux(spec: RunSpec) -> int:
    params = spec.parameters()
    flux = flux_profile(params, spec.case, spec.nu_m)
    x = np.linspace(0.0, 1.0, spec.extra.get("points", 101))
    _emit(columns_csv_text({"x": x, "q_U": flux.q_U(x), "j_U": flux.j_U(x)}), spec.out)
    return 0


def run_steady_constant(spec: RunSpec) -> int:
    state = constant_steady_state(spec.parameters())
    _emit(json_text({"C_G_star": state.C_G_star, "C_A_star": state.C_A_star, "P_star": state.P_star}), spec.out)
    return 0


def run_residual_check(spec: RunSpec) -> int:
    params = spec.parameters()
    reports = []
    for n in (spec.N, 2 * spec.N):
        solution = solve_profiles(params, spec.case, n, spec.nu_m, spec.linear_nu_form)
        reports.append(steady_residual_check(solution).as_dict())
    coarse, fine = reports
    ratios = {
        k: coarse[k] / fine[k]
        for k in ("fluid", "glucose", "albumin")
        if fine[k] > 0
    }
    _emit(json_text({"case": spec.case, "coarse": coarse, "fine": fine, "ratio": ratios}), spec.out)
    return 0


def run_bessel_table(spec: RunSpec) -> int:
    y = np.linspace(spec.extra["start"], spec.extra["stop"], spec.extra["count"])
    table = bessel_table(y)
    _emit(columns_csv_text(dict(zip(("y", "I0", "I1", "K0", "K1"), table.T))), spec.out)
    return 0


RUNNERS = {
    "solve": run_solve,
    "flux": run_flux,
    "steady-constant": run_steady_constant,
    "sweep": run_sweep,
    "residual-check": run_residual_check,
    "bessel-table": run_bessel_table,
}


def _float_list(text):
    try:
        return tuple(float(v) for v in text.split(",") if v.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of numbers: {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pdsteady", description="Steady-state tissue transport profiles.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(p, solver=True):
        p.add_argument("--config", help="parameter file (default: bundled paper_s4.cfg)")
        p.add_argument("--set", dest="overrides", action="append", default=[], metavar="KEY=VALUE")
        if solver:
            p.add_argument("--case", choices=CASES, default="constant-nu")
            p.add_argument("--nu-m", type=float, help="constant void volume (default: nu_max)")

    def grid(p):
        p.add_argument("--N", type=int, default=DEFAULT_N, help="number of grid intervals")
        p.add_argument("--linear-nu-form", choices=LINEAR_NU_FORMS, default="derived")

    p = sub.add_parser("solve", help="solve for all profiles")
    common(p)
    grid(p)
    p.add_argument("--out", type=Path, default=Path("."), help="output directory")

    p = sub.add_parser("flux", help="closed-form fluid flux")
    common(p)
    p.add_argument("--points", type=int, default=101)
    p.add_argument("--out", type=Path, help="CSV file (default: stdout)")

    p = sub.add_parser("steady-constant", help="constant steady state")
    common(p, solver=False)
    p.add_argument("--out", type=Path, help="JSON file (default: stdout)")

    p = sub.add_parser("sweep", help="one-parameter sweep")
    common(p)
    grid(p)
    p.add_argument("--param", required=True, help="parameter field to vary")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--values", type=_float_list, help="comma-separated values")
    group.add_argument("--range", nargs=2, type=float, metavar=("START", "STOP"))
    p.add_argument("--count", type=int, default=5, help="number of values with --range")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", type=Path, default=Path("."), help="output directory")

    p = sub.add_parser("residual-check", help="steady residuals at N and 2N")
    common(p)
    grid(p)
    p.add_argument("--out", type=Path, help="JSON file (default: stdout)")

    p = sub.add_parser("bessel-table", help="tabulate I0, I1, K0, K1")
    p.add_argument("--start", type=float, default=0.1)
    p.add_argument("--stop", type=float, default=30.0)
    p.add_argument("--count", type=int, default=300)
    p.add_argument("--out", type=Path, help="CSV file (default: stdout)")
    return parser


def spec_from_args(args: argparse.Namespace) -> RunSpec:
    kwargs = {"subcommand": args.subcommand, "out": args.out}
    for name in ("case", "config", "N", "nu_m", "linear_nu_form", "jobs"):
        if hasattr(args, name):
            kwargs[name] = getattr(args, name)
    if hasattr(args, "overrides"):
        kwargs["overrides"] = tuple(args.overrides)
    extra = {}
    if args.subcommand == "sweep":
        if args.values is not None:
            values = args.values
        else:
            if args.count < 1:
                raise ConfigError("--count must be positive")
            values = tuple(np.linspace(args.range[0], args.range[1], args.count).tolist())
        kwargs["sweep"] = SweepDescriptor(args.param, values)
    elif args.subcommand == "flux":
        extra["points"] = args.points
    elif args.subcommand == "bessel-table":
        extra.update(start=args.start, stop=args.stop, count=args.count)
    return RunSpec(extra=extra, **kwargs)


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(name)s: %(levelname)s: %(message)s",
        stream=sys.stderr,
        force=True,
    )
    try:
        spec = spec_from_args(args)
        with warnings.catch_warnings():
            # reported from solution.warnings instead, once per solve
            warnings.simplefilter("ignore", NegativeAlbuminWarning)
            return RUNNERS[spec.subcommand](spec)
    except INPUT_ERRORS as exc:
        log.error("%s", exc)
        return 2
    except SOLVER_ERRORS as exc:
        log.error("%s: %s", type(exc).__name__, exc)
        return 1
    except OSError as exc:
        log.error("I/O error: %s", exc)
        return 1


if __name__ == "__main__":
    sys.exit(main())
