"""Command-line front end.

    bestchoice threshold --k 2
    bestchoice bound --k 3 --grid 0:1:0.25 --format csv
    bestchoice exact --classes 5,5 --t 0.5
    bestchoice simulate --classes 1,1 --t 0.5 --trials 1000000 --seed 42
    bestchoice sweep --classes 20,20 --grid 0:1:0.05 --trials 100000 --out curve.csv
    bestchoice best-or-worst --n 50 --t 0.5 --trials 1000000
    bestchoice optimize --k 4 --objective analytic-bound

Output is JSON lines on stdout unless ``--format csv`` or ``--out`` says
otherwise. Exit codes: 0 ok, 2 usage error, 3 I/O error, 4 quadrature
error estimate above ``--tol``.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from typing import Iterable, Optional

import numpy as np

from bestchoice.analytics import DomainError, exact_success_prob, lower_bound_h, optimal_threshold
from bestchoice.model import ClassCounts, ModelViolationError
from bestchoice.montecarlo import SimulationConfig, simulate, simulate_best_or_worst, sweep
from bestchoice.optimize import OBJECTIVES, SearchConfig, optimize_threshold

FORMAT_VERSION = "1.0"
EXIT_OK, EXIT_USAGE, EXIT_IO, EXIT_NUMERIC = 0, 2, 3, 4

SWEEP_COLUMNS = ["t", "success_rate", "ci_low", "ci_high", "no_stop_rate", "exact", "h_bound"]


class UsageError(Exception):
    pass


class NumericalError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # one-line diagnostic, exit 2
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _num(x):
    if isinstance(x, (bool, str)) or x is None:
        return x
    if isinstance(x, (int, np.integer)):
        return int(x)
    return float(f"{float(x):.12g}")


def _csv_cell(x) -> str:
    x = _num(x)
    if isinstance(x, float):
        return f"{x:.12g}"
    return str(x)


def parse_grid(text: str) -> list[float]:
    """``start:stop:step``, endpoints inclusive, inside [0, 1]."""
    try:
        start, stop, step = (float(p) for p in text.split(":"))
    except ValueError as exc:
        raise UsageError(f"grid must look like start:stop:step, got {text!r}") from exc
    if step <= 0 or stop < start:
        raise UsageError(f"bad grid {text!r}")
    count = int(np.floor((stop - start) / step + 1e-9)) + 1
    values = [round(start + i * step, 12) for i in range(count)]
    if stop - values[-1] > 1e-9:
        values.append(stop)
    if values[0] < 0.0 or values[-1] > 1.0:
        raise UsageError(f"grid {text!r} leaves [0, 1]")
    return values


def _unit(text: str) -> float:
    try:
        value = float(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from exc
    if not 0.0 <= value <= 1.0:
        raise argparse.ArgumentTypeError(f"{value} is outside [0, 1]")
    return value


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from exc
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def _seed(text: str) -> int:
    value = int(text)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must be a 64-bit unsigned integer")
    return value


def _classes(text: str) -> ClassCounts:
    try:
        return ClassCounts.parse(text)
    except ModelViolationError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def record(command: str, parameters: dict, results: dict) -> dict:
    return {
        "command": command,
        "format_version": FORMAT_VERSION,
        "parameters": {k: _num(v) for k, v in parameters.items()},
        "results": {k: _num(v) for k, v in results.items()},
    }


def _render(records: list[dict], fmt: str, columns: Optional[list[str]] = None) -> str:
    if fmt == "json":
        return "".join(json.dumps(r) + "\n" for r in records)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    if columns is None:
        columns = list(records[0]["parameters"]) + list(records[0]["results"])
    writer.writerow(columns)
    for r in records:
        merged = {**r["parameters"], **r["results"]}
        writer.writerow([_csv_cell(merged[c]) for c in columns])
    return buf.getvalue()


# --------------------------------------------------------------------------
# commands


def cmd_threshold(args) -> list[dict]:
    if args.k < 1:
        raise UsageError("k must be >= 1")
    return [record("threshold", {"k": args.k}, {"t": optimal_threshold(args.k)})]


def cmd_bound(args) -> list[dict]:
    if args.k < 1:
        raise UsageError("k must be >= 1")
    if (args.t is None) == (args.grid is None):
        raise UsageError("give exactly one of --t or --grid")
    ts = [args.t] if args.t is not None else parse_grid(args.grid)
    return [record("bound", {"k": args.k, "t": t}, {"h": lower_bound_h(args.k, t)}) for t in ts]


def _exact(counts: ClassCounts, t: float, panels: int, tol: float):
    res = exact_success_prob(counts, t, panels=panels)
    if res.abs_error_estimate > tol:
        raise NumericalError(
            f"quadrature error estimate {res.abs_error_estimate:.3g} exceeds tolerance {tol:.3g}"
        )
    return res


def cmd_exact(args) -> list[dict]:
    res = _exact(args.classes, args.t, args.panels, args.tol)
    params = {"classes": ",".join(map(str, args.classes)), "t": args.t, "panels": args.panels}
    results = {
        "value": res.value,
        "abs_error_estimate": res.abs_error_estimate,
        "quad_points": res.quad_points,
        "h_bound": lower_bound_h(args.classes.k, args.t),
    }
    return [record("exact", params, results)]


def cmd_simulate(args) -> list[dict]:
    cfg = SimulationConfig(args.classes, args.t, args.trials, args.seed, args.workers)
    stats = simulate(cfg)
    params = {
        "classes": ",".join(map(str, args.classes)),
        "t": args.t,
        "trials": args.trials,
        "seed": args.seed,
    }
    return [record("simulate", params, stats.to_dict())]


def cmd_sweep(args) -> list[dict]:
    grid = parse_grid(args.grid)
    k = args.classes.k
    rows = []
    for t, stats in sweep(args.classes, grid, args.trials, args.seed, args.workers):
        exact = _exact(args.classes, t, args.panels, args.tol)
        rows.append(
            record(
                "sweep",
                {"classes": ",".join(map(str, args.classes)), "trials": args.trials, "seed": args.seed},
                {
                    "t": t,
                    "success_rate": stats.success_rate,
                    "ci_low": stats.ci95_low,
                    "ci_high": stats.ci95_high,
                    "no_stop_rate": stats.no_stop_rate,
                    "std_err": stats.std_err,
                    "exact": exact.value,
                    "h_bound": lower_bound_h(k, t),
                },
            )
        )
    return rows


def cmd_best_or_worst(args) -> list[dict]:
    stats = simulate_best_or_worst(args.n, args.t, args.trials, args.seed, args.workers)
    params = {"n": args.n, "t": args.t, "trials": args.trials, "seed": args.seed}
    results = stats.to_dict()
    for key in ("n", "threshold", "trials"):
        results.pop(key)
    return [record("best-or-worst", params, results)]


def cmd_optimize(args) -> list[dict]:
    if args.k is None and args.classes is None:
        raise UsageError("give --k or --classes")
    if args.k is not None and args.classes is not None:
        raise UsageError("--k is inferred from --classes; give only one")
    if args.k is not None and args.k < 1:
        raise UsageError("k must be >= 1")
    search = SearchConfig(
        grid_points=args.grid_points,
        tol=args.tol,
        trials=args.trials,
        master_seed=args.seed,
        dense_points=args.dense_points,
    )
    res = optimize_threshold(k=args.k, counts=args.classes, objective=args.objective, search=search)
    params = {
        "k": args.k if args.k is not None else args.classes.k,
        "classes": ",".join(map(str, args.classes)) if args.classes else "",
        "objective": args.objective,
    }
    results = {
        "t_star": res.t_star,
        "value": res.value,
        "method": res.method,
        "evaluations": res.evaluations,
        "flagged": res.flagged,
    }
    return [record("optimize", params, results)]


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="bestchoice", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, default_format="json"):
        p.add_argument("--format", choices=["json", "csv"], default=default_format)
        p.add_argument("--out", default=None, help="write to FILE instead of stdout")

    p = sub.add_parser("threshold", help="print t_k = k^(-1/(k-1))")
    p.add_argument("--k", type=int, required=True)
    common(p)
    p.set_defaults(func=cmd_threshold)

    p = sub.add_parser("bound", help="lower bound h_k(t)")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--t", type=_unit)
    p.add_argument("--grid")
    common(p)
    p.set_defaults(func=cmd_bound, columns=["t", "h"])

    p = sub.add_parser("exact", help="exact success probability by quadrature")
    p.add_argument("--classes", type=_classes, required=True)
    p.add_argument("--t", type=_unit, required=True)
    p.add_argument("--panels", type=_positive_int, default=256)
    p.add_argument("--tol", type=float, default=1e-8)
    common(p)
    p.set_defaults(func=cmd_exact)

    p = sub.add_parser("simulate", help="Monte Carlo outcome rates")
    p.add_argument("--classes", type=_classes, required=True)
    p.add_argument("--t", type=_unit, required=True)
    p.add_argument("--trials", type=_positive_int, default=100_000)
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--workers", type=_positive_int, default=1)
    common(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("sweep", help="empirical, exact and bound curves along a grid")
    p.add_argument("--classes", type=_classes, required=True)
    p.add_argument("--grid", required=True)
    p.add_argument("--trials", type=_positive_int, default=100_000)
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--workers", type=_positive_int, default=1)
    p.add_argument("--panels", type=_positive_int, default=256)
    p.add_argument("--tol", type=float, default=1e-8)
    common(p, default_format="csv")
    p.set_defaults(func=cmd_sweep, columns=SWEEP_COLUMNS)

    p = sub.add_parser("best-or-worst", help="select the best or the worst of one ranked stream")
    p.add_argument("--n", type=_positive_int, required=True)
    p.add_argument("--t", type=_unit, required=True)
    p.add_argument("--trials", type=_positive_int, default=100_000)
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--workers", type=_positive_int, default=1)
    common(p)
    p.set_defaults(func=cmd_best_or_worst)

    p = sub.add_parser("optimize", help="search the best threshold for an objective")
    p.add_argument("--k", type=int)
    p.add_argument("--classes", type=_classes)
    p.add_argument("--objective", choices=OBJECTIVES, default="analytic-bound")
    p.add_argument("--grid-points", type=_positive_int, default=21)
    p.add_argument("--dense-points", type=_positive_int, default=2001)
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--trials", type=_positive_int, default=100_000)
    p.add_argument("--seed", type=_seed, default=0)
    common(p)
    p.set_defaults(func=cmd_optimize)
    return parser


def main(argv: Optional[Iterable[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(None if argv is None else list(argv))
    try:
        records = args.func(args)
    except (UsageError, DomainError, ModelViolationError) as exc:
        print(f"bestchoice {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NumericalError as exc:
        print(f"bestchoice {args.command}: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    text = _render(records, args.format, getattr(args, "columns", None) if args.format == "csv" else None)
    if args.out is None:
        sys.stdout.write(text)
        return EXIT_OK
    try:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        print(f"bestchoice {args.command}: cannot write {args.out}: {exc.strerror}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
