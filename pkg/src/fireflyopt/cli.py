"""Command-line interface.

Subcommands:
  run             execute a config file, writing trace CSV + summary JSON
                  (and a convergence figure unless --no-plot)
  curves          emit a parameter-schedule or visual-range series as CSV
  transfer-table  emit all nine transfer functions on a grid as CSV
  bench           run the oracle comparison suites and print pass/fail lines

Exit codes: 0 success, 1 runtime failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

import numpy as np

from .discrete import visual_range_at
from .discretize import TRANSFER_IDS, transfer
from .harness import (ConfigError, _fmt, parse_config, run_experiment,
                      summarize, write_summary_json, write_trace_csv)
from .schedules import (constant_alpha, emit_curve, exp_ramp, floor_dim,
                        geometric, linear, per_iter_factor, sigmoid_decay)

_CURVE_KINDS = ("constant", "geometric", "per-iter-factor", "sigmoid-decay",
                "linear", "floor-dim", "exp-ramp", "visual-range")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fireflyopt",
                                     description="Firefly-algorithm optimization toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="execute an experiment config")
    p_run.add_argument("--config", required=True, help="path to a key=value config file")
    p_run.add_argument("--out", required=True, help="output directory")
    p_run.add_argument("--workers", type=int, default=1,
                       help="parallel replicate processes (default 1)")
    p_run.add_argument("--plot", action=argparse.BooleanOptionalAction, default=True,
                       help="render a convergence figure next to the CSV")

    p_curves = sub.add_parser("curves", help="emit a schedule series as CSV")
    p_curves.add_argument("--schedule", required=True, choices=_CURVE_KINDS)
    p_curves.add_argument("--maxitr", type=int, default=100)
    p_curves.add_argument("--alpha0", type=float)
    p_curves.add_argument("--theta", type=float)
    p_curves.add_argument("--alpha-max", type=float)
    p_curves.add_argument("--alpha-min", type=float)
    p_curves.add_argument("--n", type=int)
    p_curves.add_argument("--gamma-max", type=float)
    p_curves.add_argument("--gamma-min", type=float)
    p_curves.add_argument("--dv-max", type=float, default=3.0)
    p_curves.add_argument("--dv-min", type=float, default=0.2)
    p_curves.add_argument("--value", type=float, help="constant schedule value")
    p_curves.add_argument("--out", help="CSV path (stdout when omitted)")
    p_curves.add_argument("--plot", action=argparse.BooleanOptionalAction, default=True,
                          help="render the curve next to the CSV (needs --out)")

    p_table = sub.add_parser("transfer-table", help="emit transfer-function values as CSV")
    p_table.add_argument("--from", dest="lo", type=float, default=-8.0)
    p_table.add_argument("--to", dest="hi", type=float, default=8.0)
    p_table.add_argument("--points", type=int, default=161)
    p_table.add_argument("--v1-conventional", action="store_true",
                         help="use the conventional sqrt(pi)/2 constant inside V1")
    p_table.add_argument("--out", help="CSV path (stdout when omitted)")
    p_table.add_argument("--plot", action=argparse.BooleanOptionalAction, default=True,
                         help="render the curves next to the CSV (needs --out)")

    p_bench = sub.add_parser("bench", help="run the oracle comparison suites")
    p_bench.add_argument("--quick", action="store_true",
                         help="reduced replication for a fast smoke run")
    p_bench.add_argument("--workers", type=int, default=max(1, os.cpu_count() or 1))
    return parser


def _require(args, parser, names) -> None:
    for name in names:
        if getattr(args, name.replace("-", "_")) is None:
            parser.error(f"--{name} is required for --schedule {args.schedule}")


def _curve_series(args, parser):
    kind = args.schedule
    if kind == "visual-range":
        if args.maxitr < 2:
            parser.error("--maxitr must be >= 2 for visual-range")
        return [(itr, visual_range_at(args.dv_min, args.dv_max, itr, args.maxitr))
                for itr in range(args.maxitr + 1)]
    if kind == "constant":
        _require(args, parser, ["value"])
        schedule = constant_alpha(args.value)
    elif kind == "geometric":
        _require(args, parser, ["alpha0", "theta"])
        schedule = geometric(args.alpha0, args.theta)
    elif kind == "per-iter-factor":
        _require(args, parser, ["alpha0"])
        schedule = per_iter_factor(args.alpha0)
    elif kind == "sigmoid-decay":
        _require(args, parser, ["alpha0"])
        schedule = sigmoid_decay(args.alpha0)
    elif kind == "linear":
        _require(args, parser, ["alpha-max", "alpha-min"])
        schedule = linear(args.alpha_max, args.alpha_min)
    elif kind == "floor-dim":
        _require(args, parser, ["n"])
        schedule = floor_dim(args.n)
    else:
        _require(args, parser, ["gamma-max", "gamma-min"])
        schedule = exp_ramp(args.gamma_max, args.gamma_min)
    return emit_curve(schedule, args.maxitr)


def _emit_csv(lines, out_path) -> None:
    text = "\n".join(lines) + "\n"
    if out_path is None:
        sys.stdout.write(text)
    else:
        with open(out_path, "w", encoding="ascii", newline="") as fh:
            fh.write(text)


def _cmd_run(args) -> int:
    with open(args.config, encoding="utf-8") as fh:
        config = parse_config(fh.read())
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    records = run_experiment(config, workers=args.workers)
    trace_path = out_dir / "trace.csv"
    summary_path = out_dir / "summary.json"
    write_trace_csv(records, trace_path)
    summary = summarize(config, records)
    write_summary_json(summary, summary_path)
    if args.plot:
        from .plots import plot_convergence
        plot_convergence(records, out_dir / "convergence.png")
    stats = summary["stats"]
    print(f"wrote {trace_path} and {summary_path}")
    print(f"best {stats['best']!r}  mean {stats['mean']!r}  "
          f"worst {stats['worst']!r}  over {stats['replicates']} replicate(s)")
    if "success_rate" in stats:
        print(f"success rate vs oracle: {stats['success_rate']:.3f}")
    return 0


def _cmd_curves(args, parser) -> int:
    series = _curve_series(args, parser)
    lines = ["iteration,value"] + [f"{itr},{_fmt(value)}" for itr, value in series]
    _emit_csv(lines, args.out)
    if args.out and args.plot:
        from .plots import plot_curve
        ylabel = "gamma" if args.schedule == "exp-ramp" else (
            "visual range" if args.schedule == "visual-range" else "alpha")
        plot_curve(series, Path(args.out).with_suffix(".png"),
                   ylabel=ylabel, label=args.schedule)
    return 0


def _cmd_transfer_table(args, parser) -> int:
    if args.points < 2:
        parser.error("--points must be >= 2")
    xs = np.linspace(args.lo, args.hi, args.points)
    columns = {fn: transfer(fn, xs, v1_conventional=args.v1_conventional)
               for fn in TRANSFER_IDS}
    lines = ["x," + ",".join(TRANSFER_IDS)]
    for k, x in enumerate(xs):
        row = [_fmt(float(x))] + [_fmt(float(columns[fn][k])) for fn in TRANSFER_IDS]
        lines.append(",".join(row))
    _emit_csv(lines, args.out)
    if args.out and args.plot:
        from .plots import plot_transfer_table
        plot_transfer_table(xs, columns, Path(args.out).with_suffix(".png"))
    return 0


def _cmd_bench(args) -> int:
    from .suite import run_all
    results = run_all(workers=args.workers, quick=args.quick)
    for result in results:
        print(result.line())
    return 0 if all(r.passed for r in results) else 1


def cli_main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "curves":
            return _cmd_curves(args, parser)
        if args.command == "transfer-table":
            return _cmd_transfer_table(args, parser)
        return _cmd_bench(args)
    except SystemExit as exc:  # parser.error inside subcommand handling
        return int(exc.code or 0)
    except (ConfigError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(cli_main(sys.argv[1:]))


if __name__ == "__main__":
    main()
