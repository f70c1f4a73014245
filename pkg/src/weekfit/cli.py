"""Command-line front end: fit, predict, evaluate, synth, inspect, compare.

Exit status is 0 on success, 1 for input errors (bad files, gaps, short
series), and 2 for internal faults.  All file outputs use fixed float
formatting so identical invocations produce byte-identical files; timing
lines are printed only on request (``--timing``) to keep stdout
deterministic as well.
"""

from __future__ import annotations

import argparse
import csv
import sys
import time

from .baselines import BaselineKind, BaselinePredictor
from .dataio import (
    SplitSpec,
    aggregate_hourly,
    load_csv,
    load_model,
    save_model,
    split,
    write_series_csv,
    write_timestamp_csv,
)
from .errors import SeriesTooShortError, WeekfitError
from .estimator import FitConfig, ModelPredictor, fit, write_trace_csv
from .metrics import EvalReport, time_evaluation
from .model import (
    ComponentId,
    HOURS_PER_WEEK,
    generate_synthetic,
    predict_series,
    sigma_interval,
    week_clock_at,
)


def format_clock(hours: float) -> str:
    """Render an hour count as H:MM, marking day spill as (+1d)/(-1d)."""
    day_offset = 0
    while hours >= 24.0:
        hours -= 24.0
        day_offset += 1
    while hours < 0.0:
        hours += 24.0
        day_offset -= 1
    minutes = int(round(hours * 60.0))
    if minutes == 24 * 60:  # rounding can land exactly on midnight
        minutes = 0
        day_offset += 1
    text = f"{minutes // 60}:{minutes % 60:02d}"
    if day_offset > 0:
        text += f" (+{day_offset}d)"
    elif day_offset < 0:
        text += f" ({day_offset}d)"
    return text


def _print_table(header: list[str], rows: list[list[str]]) -> None:
    widths = [max(len(header[i]), *(len(row[i]) for row in rows)) for i in range(len(header))]
    for line in [header] + rows:
        print("  ".join(cell.ljust(widths[i]) for i, cell in enumerate(line)).rstrip())


def _write_line_svg(ys, path, title: str) -> None:
    """Minimal static polyline plot; deterministic output, no dependencies."""
    width, height, margin = 640, 360, 40
    n = len(ys)
    lo = min(ys)
    hi = max(ys)
    span = (hi - lo) or 1.0
    points = []
    for i, y in enumerate(ys):
        px = margin + (width - 2 * margin) * (i / max(n - 1, 1))
        py = height - margin - (height - 2 * margin) * ((y - lo) / span)
        points.append(f"{px:.2f},{py:.2f}")
    with open(path, "w") as handle:
        handle.write(
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">\n'
            f'<rect width="{width}" height="{height}" fill="white"/>\n'
            f'<text x="{width / 2:.0f}" y="20" text-anchor="middle" '
            f'font-family="sans-serif" font-size="14">{title}</text>\n'
            f'<polyline fill="none" stroke="steelblue" stroke-width="1.5" '
            f'points="{" ".join(points)}"/>\n'
            "</svg>\n"
        )


def _load_series(path, train_weeks: int):
    spec = SplitSpec(train_weeks=train_weeks)
    series = aggregate_hourly(load_csv(path), spec)
    return series, spec


def _cmd_fit(args) -> int:
    series, spec = _load_series(args.input, args.train_weeks)
    n_train = args.train_weeks * HOURS_PER_WEEK
    if len(series) < n_train:
        raise SeriesTooShortError(
            f"need {n_train} samples for {args.train_weeks} training weeks, got {len(series)}"
        )
    train = series if len(series) == n_train else split(series, spec)[0]
    config = FitConfig(
        max_iterations=args.max_iterations,
        relative_tolerance=args.tolerance,
    )
    report = fit(train, config)
    save_model(report.model, args.out)
    trace = report.objective_trace
    status = "converged" if report.converged else "not converged"
    print(f"fit: {len(train)} samples, J {trace[0]:.6g} -> {trace[-1]:.6g} "
          f"in {report.iterations} iterations ({status})")
    print(f"wrote {args.out}")
    if args.trace:
        write_trace_csv(trace, args.trace)
        print(f"wrote {args.trace}")
    if args.svg:
        _write_line_svg(trace, args.svg, "objective vs iteration")
        print(f"wrote {args.svg}")
    if args.timing:
        print(f"elapsed: {report.elapsed_seconds:.3f}s")
    return 0


def _cmd_predict(args) -> int:
    model = load_model(args.model)
    series = predict_series(model, args.weeks * HOURS_PER_WEEK)
    write_series_csv(series, args.out)
    print(f"wrote {args.out} ({len(series)} hours)")
    if args.svg:
        _write_line_svg(series.values, args.svg, "predicted traffic")
        print(f"wrote {args.svg}")
    return 0


def _cmd_evaluate(args) -> int:
    model = load_model(args.model)
    series, spec = _load_series(args.input, args.train_weeks)
    _, test = split(series, spec)
    week, clock = week_clock_at(test.start)
    t0 = time.perf_counter()
    prediction = predict_series(model, len(test), week, clock)
    elapsed = time.perf_counter() - t0
    report = EvalReport.from_predictions(
        test.values, prediction.values, 0.0, elapsed
    )
    if args.json:
        print(report.to_json(include_timing=args.timing))
    else:
        for name, value in report.as_dict(include_timing=args.timing).items():
            print(f"{name}: {value!r}")
    return 0


def _cmd_synth(args) -> int:
    model = load_model(args.model)
    series = generate_synthetic(model, args.weeks, args.noise, args.seed)
    write_timestamp_csv(series, args.out)
    print(f"wrote {args.out} ({len(series)} hours)")
    return 0


def _cmd_inspect(args) -> int:
    model = load_model(args.model)
    rows = []
    for comp in ComponentId:
        params = model[comp]
        low, high = sigma_interval(params)
        sigma = high - params.peak_time
        rows.append([
            comp.value,
            comp.category.value,
            comp.period.value,
            f"{params.peak_rate:.6g}",
            format_clock(params.peak_time),
            f"{sigma:.2f}",
            f"{format_clock(low)} - {format_clock(high)}",
        ])
    _print_table(
        ["component", "category", "period", "peak_rate", "peak_time", "sigma_h", "one_sigma_interval"],
        rows,
    )
    return 0


def _cmd_compare(args) -> int:
    series, spec = _load_series(args.input, args.train_weeks)
    train, test = split(series, spec)
    config = FitConfig(max_iterations=args.max_iterations, relative_tolerance=args.tolerance)
    contenders = [
        ("weekfit", ModelPredictor(config)),
        ("seasonal_naive", BaselinePredictor(BaselineKind.SEASONAL_NAIVE)),
        ("weekly_profile_mean", BaselinePredictor(BaselineKind.WEEKLY_PROFILE_MEAN)),
    ]
    reports = [(name, time_evaluation(p, train, test)) for name, p in contenders]
    header = ["predictor", "mse", "rmse", "mae", "r2", "train_s", "predict_s"]
    rows = [
        [
            name,
            f"{r.mse:.6g}",
            f"{r.rmse:.6g}",
            f"{r.mae:.6g}",
            f"{r.r2:.6g}",
            f"{r.elapsed_train_seconds:.3f}",
            f"{r.elapsed_predict_seconds:.3f}",
        ]
        for name, r in reports
    ]
    _print_table(header, rows)
    if args.csv:
        with open(args.csv, "w", newline="") as handle:
            writer = csv.writer(handle)
            writer.writerow(["predictor"] + EvalReport.csv_header())
            for name, r in reports:
                writer.writerow([name] + r.csv_row())
        print(f"wrote {args.csv}")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="weekfit",
        description="Fit and evaluate weekly Gaussian-component traffic models.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_fit_flags(p):
        p.add_argument("--max-iterations", type=int, default=5000)
        p.add_argument("--tolerance", type=float, default=1e-8)

    p = sub.add_parser("fit", help="fit a model to a timestamp,value CSV")
    p.add_argument("--input", required=True)
    p.add_argument("--train-weeks", type=int, default=2)
    p.add_argument("--out", required=True)
    p.add_argument("--trace", help="write the objective trajectory CSV here")
    p.add_argument("--svg", help="write an objective-trajectory plot here")
    p.add_argument("--timing", action="store_true", help="print elapsed time")
    add_fit_flags(p)
    p.set_defaults(handler=_cmd_fit)

    p = sub.add_parser("predict", help="evaluate a saved model over a horizon")
    p.add_argument("--model", required=True)
    p.add_argument("--weeks", type=int, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--svg", help="write a prediction plot here")
    p.set_defaults(handler=_cmd_predict)

    p = sub.add_parser("evaluate", help="score a saved model on the test split")
    p.add_argument("--model", required=True)
    p.add_argument("--input", required=True)
    p.add_argument("--train-weeks", type=int, default=2)
    p.add_argument("--json", action="store_true")
    p.add_argument("--timing", action="store_true", help="include elapsed times")
    p.set_defaults(handler=_cmd_evaluate)

    p = sub.add_parser("synth", help="generate noisy synthetic data from a model")
    p.add_argument("--model", required=True)
    p.add_argument("--weeks", type=int, required=True)
    p.add_argument("--noise", type=float, default=0.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(handler=_cmd_synth)

    p = sub.add_parser("inspect", help="per-component peak and interval table")
    p.add_argument("--model", required=True)
    p.set_defaults(handler=_cmd_inspect)

    p = sub.add_parser("compare", help="fitted model vs baselines on the test split")
    p.add_argument("--input", required=True)
    p.add_argument("--train-weeks", type=int, default=2)
    p.add_argument("--csv", help="also write the comparison table as CSV")
    add_fit_flags(p)
    p.set_defaults(handler=_cmd_compare)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 1
    try:
        return args.handler(args)
    except (WeekfitError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # pragma: no cover - internal faults
        print(f"internal error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
