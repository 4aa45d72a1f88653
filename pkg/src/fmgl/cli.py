"""Command-line interface.

Every subcommand prints CSV (header row, LF line endings, shortest
round-trip floats) or, with ``--json``, a JSON document carrying a schema
version and the effective configuration. Defaults can be overridden through
``FMGL_<OPTION>`` environment variables; explicit flags win over both.

Exit codes: 0 success, 2 usage error, 3 numerical failure, 4 solver
non-convergence.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import random
import sys
from pathlib import Path
from typing import Sequence

import numpy as np

from fmgl import analysis, expr, special
from fmgl.closed_forms import classical_sin, closed_form
from fmgl.errors import (
    ConvergenceError,
    DomainError,
    FmglError,
    GridMisalignmentError,
    PoleError,
    SingularMatrixError,
    SolverConvergenceError,
)
from fmgl.functions import Catalog, resolve, sine, cosine
from fmgl.grunwald import (
    FracOrder,
    GridSpec,
    classical_gl_derivative,
    fm_gl_derivative_series,
    grunwald_weights,
)
from fmgl.integral import fm_gl_integral_form
from fmgl.solver import RotationSystem, max_deviation, solve_linear, solve_nonlinear
from fmgl.table import Table, dumps
from fmgl.trajectory import HistorySegment, periodicity_defect

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERIC = 3
EXIT_SOLVER = 4

ENV_PREFIX = "FMGL_"


class UsageError(Exception):
    pass


# {{{ helpers


def _positive_float(text: str) -> float:
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError(f"must be positive: {text}")
    return value


def _order(text: str) -> float:
    value = float(text)
    if not (value >= 0 and math.isfinite(value)):
        raise argparse.ArgumentTypeError(f"order must be non-negative: {text}")
    return value


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be a positive integer: {text}")
    return value


def _float_list(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _grid_times(t0: float, t1: float, h: float) -> np.ndarray:
    n = math.floor((t1 - t0) / h + 1.0e-9) + 1
    return t0 + np.arange(n) * h


def _effective_config(args: argparse.Namespace) -> dict:
    return {
        k: v
        for k, v in sorted(vars(args).items())
        if k not in ("handler", "json", "out") and not callable(v)
    }


def _emit(args: argparse.Namespace, table: Table, report: dict | None = None) -> None:
    """Write *table* as CSV (or JSON) to ``--out`` or stdout; a JSON sidecar
    with the run parameters and *report* goes next to ``--out``.
    """
    config = _effective_config(args)
    if args.json:
        text = table.to_json(command=args.command, config=config, report=report or {})
    else:
        text = table.to_csv()

    if args.out:
        path = Path(args.out)
        path.write_text(text, encoding="utf-8", newline="\n")
        if not args.json:
            sidecar = {
                "schema_version": 1,
                "command": args.command,
                "config": config,
                "columns": list(table.columns),
                "report": report or {},
            }
            Path(f"{path}.json").write_text(dumps(sidecar), encoding="utf-8", newline="\n")
    else:
        sys.stdout.write(text)
        if report and not args.json:
            sys.stderr.write(json.dumps(report, sort_keys=True) + "\n")


def _function(text: str):
    try:
        return resolve(text)
    except expr.ParseError as exc:
        raise UsageError(f"--fn: {exc}") from None
    except (ValueError, TypeError) as exc:
        raise UsageError(f"--fn: {exc}") from None


# }}}


# {{{ commands


def cmd_derive(args: argparse.Namespace) -> None:
    f = _function(args.fn)
    order = FracOrder(args.alpha)
    grid = GridSpec(args.L, args.N)
    if args.t1 <= args.t0:
        raise UsageError("--t1 must be greater than --t0")
    if args.compare and not isinstance(f, Catalog):
        raise UsageError("--compare needs a function with a closed form")
    if args.method == "oracle" and not isinstance(f, Catalog):
        raise UsageError("--method oracle needs a function with a closed form")

    if args.method == "discrete":
        series = fm_gl_derivative_series(f, args.t0, args.t1, order, grid)
        times, values = series.times, series.states
    else:
        times = _grid_times(args.t0, args.t1, grid.h)
        if args.method == "integral":
            values = [fm_gl_integral_form(f, t, order, args.L, args.panels) for t in times]
        else:
            values = [closed_form(f, t, args.alpha, args.L) for t in times]

    if args.compare:
        table = Table(("t", "value", "oracle", "abs_error"))
        errors = []
        for t, v in zip(times, values):
            ref = closed_form(f, float(t), args.alpha, args.L)
            errors.append(abs(v - ref))
            table.append(float(t), float(v), ref, abs(float(v) - ref))
        report = {"max_abs_error": max(errors)}
    else:
        table = Table(("t", "value"))
        for t, v in zip(times, values):
            table.append(float(t), float(v))
        report = None
    _emit(args, table, report)


def cmd_oracle(args: argparse.Namespace) -> None:
    f = _function(args.fn)
    if not isinstance(f, Catalog):
        raise UsageError("oracle needs a function with a closed form")
    if args.t1 <= args.t0:
        raise UsageError("--t1 must be greater than --t0")
    table = Table(("t", "value"))
    for t in np.linspace(args.t0, args.t1, args.num):
        table.append(float(t), closed_form(f, float(t), args.alpha, args.L))
    _emit(args, table)


def cmd_classic(args: argparse.Namespace) -> None:
    f = _function(args.fn)
    if args.t1 <= args.t0 or args.t0 <= args.a:
        raise UsageError("need --a < --t0 < --t1")
    is_sin = f == sine()
    columns = ("t", "value", "oracle", "abs_error") if is_sin and args.a == 0 else ("t", "value")
    table = Table(columns)
    for t in np.linspace(args.t0, args.t1, args.num):
        t = float(t)
        value = classical_gl_derivative(f, t, args.alpha, args.a, args.steps)
        if len(columns) == 4:
            ref = classical_sin(t, args.alpha)
            table.append(t, value, ref, abs(value - ref))
        else:
            table.append(t, value)
    _emit(args, table)


def cmd_weights(args: argparse.Namespace) -> None:
    weights = grunwald_weights(args.alpha, args.N)
    table = Table(("k", "w"))
    for k, w in enumerate(weights.w):
        table.append(k, float(w))
    _emit(args, table)


def cmd_ml(args: argparse.Namespace) -> None:
    table = Table(("alpha", "beta", "z", "value", "error_estimate", "method"))
    for z in args.z:
        q = special.MLQuery(args.alpha, args.beta, z, args.tol)
        result = special.mittag_leffler_result(q)
        table.append(args.alpha, args.beta, z, result.value, result.error, result.method)
    _emit(args, table)


def cmd_gamma(args: argparse.Namespace) -> None:
    table = Table(("x", "gamma", "recip_gamma"))
    for x in args.x:
        table.append(x, special.gamma(x), special.recip_gamma(x))
    _emit(args, table)


def _load_system(args: argparse.Namespace) -> tuple[np.ndarray, RotationSystem | None]:
    if args.system == "rotation":
        system = RotationSystem.periodic(args.alpha, args.L)
        return system.matrix, system
    if not args.matrix:
        raise UsageError("--system file needs --matrix PATH")
    try:
        doc = json.loads(Path(args.matrix).read_text(encoding="utf-8"))
        A = np.array(doc["A"], dtype=np.float64)
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"--matrix: cannot read system matrix: {exc}") from None
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise UsageError(f"--matrix: A must be square, got shape {A.shape}")
    return A, None


def cmd_simulate(args: argparse.Namespace) -> None:
    A, rotation = _load_system(args)
    d = A.shape[0]

    history = args.history or ["cossin"]
    if history == ["cossin"]:
        if d != 2:
            raise UsageError("--history cossin needs a 2-dimensional system")
        funcs = [cosine(), sine()]
        scale = args.c
    else:
        funcs = [_function(h) for h in history]
        scale = 1.0
        if len(funcs) != d:
            raise UsageError(f"--history needs {d} components, got {len(funcs)}")

    hist = HistorySegment.from_functions(funcs, 0.0, args.L, args.N)
    hist = HistorySegment(0.0, args.L, args.N, scale * hist.samples)
    if args.solver == "direct":
        traj = solve_linear(A, hist, args.alpha, args.t_end)
    else:
        traj = solve_nonlinear(
            lambda x: A @ x, hist, args.alpha, args.t_end, args.fp_tol, args.fp_max
        )

    period = args.period if args.period is not None else args.L
    report: dict = {
        "alpha": args.alpha,
        "L": args.L,
        "N": args.N,
        "h": hist.h,
        "steps": len(traj) - 1,
        "period": period,
        "solver": args.solver,
    }
    try:
        report["periodicity_defect"] = periodicity_defect(traj, period, (period, traj.times[-1]))
    except (GridMisalignmentError, ValueError) as exc:
        report["periodicity_defect"] = None
        report["periodicity_note"] = str(exc)

    if rotation is not None and history == ["cossin"]:
        report["a"] = rotation.a
        report["b"] = rotation.b
        report["max_deviation_from_exact"] = max_deviation(
            traj, lambda t: scale * np.stack([np.cos(t), np.sin(t)], axis=1)
        )

    table = Table(("t", *(f"x{i + 1}" for i in range(d))))
    for t, x in zip(traj.times, traj.states):
        table.append(float(t), *(float(v) for v in x))
    _emit(args, table, report)


def cmd_sweep(args: argparse.Namespace) -> None:
    f = _function(args.fn)
    if args.t1 <= args.t0:
        raise UsageError("--t1 must be greater than --t0")
    sweep = analysis.memory_sweep(f, args.alpha, (args.t0, args.t1), args.Ls, args.num, args.N)
    report = {
        "memory_lengths": list(sweep.Ls),
        "consecutive_sup_distance": list(sweep.distances),
    }
    _emit(args, sweep.table(), report)


def cmd_interp(args: argparse.Namespace) -> None:
    f = _function(args.fn)
    table = analysis.interpolation_curve(f, args.t, args.L, args.alphas, args.N)
    _emit(args, table)


def cmd_fig1(args: argparse.Namespace) -> None:
    demo = analysis.nonperiodicity_demo(args.alpha, args.t_max, args.steps, args.L)
    report = {
        "classical_periodicity_defect": demo.classical_defect,
        "fm_periodicity_defect": demo.fm_defect,
        "fm_memory_length": demo.L,
    }
    _emit(args, demo.table, report)


def cmd_corpus(args: argparse.Namespace) -> None:
    rng = random.Random(args.seed)
    table = Table(("expr",))
    for _ in range(args.count):
        table.append(expr.to_source(expr.random_expression(rng, args.depth)))
    _emit(args, table)


# }}}


# {{{ parser


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", help="write output to this path instead of stdout")
    p.add_argument("--json", action="store_true", help="emit JSON instead of CSV")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fmgl",
        description="Fixed memory length Grünwald-Letnikov derivatives.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("derive", help="derivative series of a function")
    p.add_argument("--fn", required=True, help="catalog name or expression in t")
    p.add_argument("--alpha", type=_order, required=True)
    p.add_argument("--L", type=_positive_float, required=True)
    p.add_argument("--N", type=_positive_int, default=4096)
    p.add_argument("--t0", type=float, default=0.0)
    p.add_argument("--t1", type=float, default=1.0)
    p.add_argument("--method", choices=("discrete", "integral", "oracle"), default="discrete")
    p.add_argument("--panels", type=_positive_int, default=1024)
    p.add_argument("--compare", action="store_true", help="add closed-form oracle columns")
    _common(p)
    p.set_defaults(handler=cmd_derive)

    p = sub.add_parser("oracle", help="closed-form derivative on a uniform grid")
    p.add_argument("--fn", required=True)
    p.add_argument("--alpha", type=_order, required=True)
    p.add_argument("--L", type=_positive_float, required=True)
    p.add_argument("--t0", type=float, default=0.0)
    p.add_argument("--t1", type=float, default=1.0)
    p.add_argument("--num", type=_positive_int, default=101)
    _common(p)
    p.set_defaults(handler=cmd_oracle)

    p = sub.add_parser("classic", help="classical (fixed lower terminal) derivative")
    p.add_argument("--fn", default="sin")
    p.add_argument("--alpha", type=_order, required=True)
    p.add_argument("--a", type=float, default=0.0)
    p.add_argument("--t0", type=float, default=0.5)
    p.add_argument("--t1", type=float, default=35.0)
    p.add_argument("--num", type=_positive_int, default=70)
    p.add_argument("--steps", type=_positive_int, default=8192)
    _common(p)
    p.set_defaults(handler=cmd_classic)

    p = sub.add_parser("weights", help="Grünwald weights")
    p.add_argument("--alpha", type=_order, required=True)
    p.add_argument("--N", type=_positive_int, required=True)
    _common(p)
    p.set_defaults(handler=cmd_weights)

    p = sub.add_parser("ml", help="Mittag-Leffler function")
    p.add_argument("--alpha", type=_positive_float, required=True)
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--z", type=float, action="append", required=True)
    p.add_argument("--tol", type=_positive_float, default=1.0e-16)
    _common(p)
    p.set_defaults(handler=cmd_ml)

    p = sub.add_parser("gamma", help="Gamma and reciprocal Gamma")
    p.add_argument("--x", type=float, action="append", required=True)
    _common(p)
    p.set_defaults(handler=cmd_gamma)

    p = sub.add_parser("simulate", help="solve a linear fixed memory system")
    p.add_argument("--system", choices=("rotation", "file"), default="rotation")
    p.add_argument("--matrix", help='JSON file {"A": [[...], ...]} for --system file')
    p.add_argument("--alpha", type=_order, required=True)
    p.add_argument("--L", type=_positive_float, required=True)
    p.add_argument("--N", type=_positive_int, required=True)
    p.add_argument("--t-end", dest="t_end", type=_positive_float, required=True)
    p.add_argument(
        "--history",
        action="append",
        help="'cossin' or one expression per component (repeat the flag)",
    )
    p.add_argument("--c", type=float, default=1.0, help="amplitude of the cossin history")
    p.add_argument("--period", type=_positive_float, help="period for the defect (default L)")
    p.add_argument("--solver", choices=("direct", "fixed-point"), default="direct",
                   help="per-step linear solve or fixed-point iteration")
    p.add_argument("--fp-tol", dest="fp_tol", type=_positive_float, default=1.0e-12)
    p.add_argument("--fp-max", dest="fp_max", type=_positive_int, default=100)
    _common(p)
    p.set_defaults(handler=cmd_simulate)

    p = sub.add_parser("sweep", help="influence of the memory length")
    p.add_argument("--fn", default="sin")
    p.add_argument("--alpha", type=_order, required=True)
    p.add_argument("--L", dest="Ls", type=_float_list, default=[10.0, 20.0, 30.0, 60.0],
                   help="comma separated memory lengths")
    p.add_argument("--t0", type=float, default=0.0)
    p.add_argument("--t1", type=float, default=4.0 * math.pi)
    p.add_argument("--num", type=_positive_int, default=401)
    p.add_argument("--N", type=_positive_int, default=4096)
    _common(p)
    p.set_defaults(handler=cmd_sweep)

    p = sub.add_parser("interp", help="interpolation of integer-order derivatives")
    p.add_argument("--fn", default="sin")
    p.add_argument("--t", type=float, default=2.0)
    p.add_argument("--L", type=_positive_float, default=10.0)
    p.add_argument("--alphas", type=_float_list, default=[0.9, 0.99, 0.999])
    p.add_argument("--N", type=_positive_int, default=8192)
    _common(p)
    p.set_defaults(handler=cmd_interp)

    p = sub.add_parser("fig1", help="classical derivative of sin against its asymptote")
    p.add_argument("--alpha", type=_order, required=True)
    p.add_argument("--t-max", dest="t_max", type=_positive_float, default=35.0)
    p.add_argument("--steps", type=_positive_int, default=350)
    p.add_argument("--L", type=_positive_float, default=30.0)
    _common(p)
    p.set_defaults(handler=cmd_fig1)

    p = sub.add_parser("corpus", help="random expressions for parser testing")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=_positive_int, default=100)
    p.add_argument("--depth", type=_positive_int, default=4)
    _common(p)
    p.set_defaults(handler=cmd_corpus)

    _apply_env_defaults(sub)
    return parser


def _apply_env_defaults(sub: argparse._SubParsersAction) -> None:
    """Let ``FMGL_<DEST>`` override option defaults (flags still win)."""
    for subparser in sub.choices.values():
        overrides = {}
        for action in subparser._actions:
            if not action.option_strings or action.dest in ("help", "out", "json"):
                continue
            value = os.environ.get(ENV_PREFIX + action.dest.upper())
            if value is None:
                continue
            if action.type is not None:
                try:
                    value = action.type(value)
                except (argparse.ArgumentTypeError, ValueError):
                    subparser.error(f"invalid {ENV_PREFIX}{action.dest.upper()}={value!r}")
            overrides[action.dest] = value
            # an environment value satisfies a required flag
            action.required = False
        if overrides:
            subparser.set_defaults(**overrides)


# }}}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits with 2 on usage errors and 0 for --help
        return int(exc.code or 0)
    try:
        args.handler(args)
    except UsageError as exc:
        print(f"fmgl {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SolverConvergenceError as exc:
        print(f"fmgl {args.command}: solver error: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except (ConvergenceError, DomainError, PoleError, SingularMatrixError) as exc:
        print(f"fmgl {args.command}: numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (FmglError, ValueError) as exc:
        print(f"fmgl {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
