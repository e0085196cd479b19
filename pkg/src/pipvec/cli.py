"""Command line entry point: ``pipvec classify | bench | fit-report``."""

from __future__ import annotations

import argparse
import logging
import sys
import time
from pathlib import Path

from . import bench
from .batch import BatchResult, BatchStats, bbox_of, classify_batch, prefilter_bbox
from .errors import DegenerateFit, PipError
from .geoio import PointsFileSpec, read_points_csv, read_polygon_geojson, write_batch_results_csv
from .geometry import CrossingMode

log = logging.getLogger("pipvec")


def _parallelism(text):
    if text == "auto":
        return text
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer or 'auto', got {text!r}") from None
    if n < 1:
        raise argparse.ArgumentTypeError("parallelism must be >= 1")
    return n


def _sizes(text):
    try:
        sizes = [int(s) for s in text.split(",") if s.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad size list {text!r}") from None
    if not sizes or any(s < 1 for s in sizes) or sorted(set(sizes)) != sizes:
        raise argparse.ArgumentTypeError("sizes must be positive and strictly ascending")
    return sizes


def _modes(text):
    try:
        return [CrossingMode.parse(m) for m in text.split(",") if m.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _column(text):
    return int(text) if text.isdigit() else text


def _emit(**kv):
    for k, v in kv.items():
        print(f"{k}={v}")


def cmd_classify(args) -> int:
    poly = read_polygon_geojson(args.polygon)
    spec = PointsFileSpec(args.points, args.x_column, args.y_column,
                          has_header=not args.no_header, delimiter=args.delimiter,
                          lenient=args.lenient)
    batch = read_points_csv(spec)
    t0 = time.perf_counter()
    pre = prefilter_bbox(batch, bbox_of(poly))
    inner = classify_batch(pre.inside_box, poly, args.mode, args.parallelism, eps=args.eps)
    elapsed = time.perf_counter() - t0
    full = pre.scatter(inner.verdicts, batch.count)
    result = BatchResult(full, BatchStats.from_verdicts(full))
    write_batch_results_csv(batch, result, args.out)
    st = result.stats
    _emit(points=batch.count, prefiltered_out=pre.outside_count, inside=st.inside,
          outside=st.outside, boundary=st.boundary, error=st.error,
          mode=args.mode.value, elapsed_s=f"{elapsed:.6f}", out=args.out)
    return 0


def _report_and_print(samples, fits, errors, args, notes=()):
    written = bench.emit_report(samples, fits, errors, args.out,
                                predict_sizes=args.predict_sizes or (),
                                figure=not args.no_figure, notes=notes)
    for alg, fit in fits.items():
        own = [s for s in samples if s.algorithm == alg]
        r2 = bench.r_squared(fit, own) if len({s.n_points for s in own}) >= 2 else float("nan")
        print(f"fit algorithm={alg} slope={fit.slope:.9g} intercept={fit.intercept:.9g} r_squared={r2:.6f}")
    for key, path in written.items():
        print(f"{key}={path}")


def cmd_bench(args) -> int:
    poly = read_polygon_geojson(args.polygon)
    samples = []
    for mode in args.mode:
        got = bench.run_scaling_bench(poly, args.sizes, mode, args.parallelism,
                                      args.reps, args.seed)
        samples.extend(got)
        for s in got:
            print(f"sample algorithm={s.algorithm} n={s.n_points} seconds={s.elapsed_seconds:.6g}")
    try:
        fits = bench.fit_by_algorithm(samples)
    except DegenerateFit as exc:
        _report_and_print(samples, {}, None, args, notes=[f"fit failed: {exc}"])
        print(f"error: cannot fit timings: {exc}; partial report written to {args.out}", file=sys.stderr)
        return 1
    errors = bench.error_report(fits, samples)
    _report_and_print(samples, fits, errors, args)
    return 0


def cmd_fit_report(args) -> int:
    samples = bench.read_timings_csv(args.timings)
    try:
        fits = bench.fit_by_algorithm(samples)
    except DegenerateFit as exc:
        _report_and_print(samples, {}, None, args, notes=[f"fit failed: {exc}"])
        print(f"error: cannot fit timings: {exc}", file=sys.stderr)
        return 1
    actual = bench.read_timings_csv(args.actual) if args.actual else samples
    errors = bench.error_report(fits, actual)
    _report_and_print(samples, fits, errors, args)
    for row in errors:
        rel = "" if row.rel_error is None else f"{row.rel_error:.6f}"
        print(f"error algorithm={row.algorithm} n={row.n_points} predicted_s={row.predicted_s:.6f} "
              f"actual_s={row.actual_s:.6f} abs_error={row.abs_error:.6f} rel_error={rel}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pipvec", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="classify a CSV of points against a GeoJSON polygon")
    p.add_argument("--points", required=True, type=Path)
    p.add_argument("--polygon", required=True, type=Path)
    p.add_argument("--out", required=True, type=Path)
    p.add_argument("--mode", type=CrossingMode.parse, default=CrossingMode.ROBUST,
                   help="robust (default), paper-c1 or paper-c2")
    p.add_argument("--parallelism", type=_parallelism, default="auto")
    p.add_argument("--x-column", type=_column, default="x")
    p.add_argument("--y-column", type=_column, default="y")
    p.add_argument("--no-header", action="store_true")
    p.add_argument("--delimiter", default=",")
    p.add_argument("--lenient", action="store_true", help="skip unparseable rows instead of failing")
    p.add_argument("--eps", type=float, default=1e-12, help="boundary tolerance (robust mode)")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("bench", help="time classification over batch sizes and fit a line")
    p.add_argument("--polygon", required=True, type=Path)
    p.add_argument("--out", required=True, type=Path, help="report JSON; .csv and .png written beside it")
    p.add_argument("--mode", type=_modes, default=[CrossingMode.ROBUST],
                   help="comma-separated modes")
    p.add_argument("--parallelism", type=_parallelism, default="auto")
    p.add_argument("--sizes", type=_sizes, default=[1000, 10000, 100000])
    p.add_argument("--reps", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--predict-sizes", type=_sizes, default=None)
    p.add_argument("--no-figure", action="store_true")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("fit-report", help="fit previously measured timings")
    p.add_argument("--timings", required=True, type=Path, help="CSV with n,algorithm,seconds")
    p.add_argument("--actual", type=Path, help="held-out timings to score the fits against")
    p.add_argument("--out", required=True, type=Path)
    p.add_argument("--predict-sizes", type=_sizes, default=None)
    p.add_argument("--no-figure", action="store_true")
    p.set_defaults(func=cmd_fit_report)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if getattr(args, "reps", 1) < 1:
        parser.error("--reps must be >= 1")
    try:
        return args.func(args)
    except FileNotFoundError as exc:
        print(f"error: file not found: {exc.filename}", file=sys.stderr)
    except (PipError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
    return 2


if __name__ == "__main__":
    sys.exit(main())
