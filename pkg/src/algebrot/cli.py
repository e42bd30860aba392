"""Command-line interface.

Verbs: ``analyze`` (classification report, optional figure), ``render``
(escape-time PGM plus .meta sidecar), ``orbit`` (orbit trace) and
``verify-paper`` (built-in verification checklist).  Exit codes: 0 on
success, 1 when verification fails, 2 on input errors, 3 when escape
certification is unavailable and ``--uncertified`` was not given.
"""

import argparse
import sys
from pathlib import Path

import numpy as np

from . import analysis, dynamics, raster
from .catalog import AlgebraSource, resolve_source
from .dynamics import OrbitMode
from .errors import AlgebrotError, OrbitOverflow, SquareInequalityUnavailable

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_INPUT = 2
EXIT_UNCERTIFIED = 3

# Flags whose values may start with '-' (negative coordinates); they are
# rewritten to --flag=value so argparse does not mistake them for options.
_VALUE_FLAGS = ("--window", "--c", "--u", "--origin", "--axis1", "--axis2")


def _absorb_negative_values(argv: list[str]) -> list[str]:
    out = []
    i = 0
    while i < len(argv):
        token = argv[i]
        if token in _VALUE_FLAGS and i + 1 < len(argv):
            out.append(f"{token}={argv[i + 1]}")
            i += 2
        else:
            out.append(token)
            i += 1
    return out


def _parse_coords(text: str, dim: int, what: str) -> np.ndarray:
    try:
        values = [float(part) for part in text.split(",")]
    except ValueError:
        raise AlgebrotError(f"bad {what}: expected comma-separated reals, got {text!r}")
    if len(values) != dim:
        raise AlgebrotError(f"{what} needs {dim} coordinates, got {len(values)}")
    return np.array(values)


def _parse_window(text: str) -> tuple[float, float, float, float]:
    try:
        values = [float(part) for part in text.split(",")]
    except ValueError:
        values = []
    if len(values) != 4:
        raise AlgebrotError(f"bad window: expected xmin,xmax,ymin,ymax, got {text!r}")
    return values[0], values[1], values[2], values[3]


def _parse_resolution(text: str) -> tuple[int, int]:
    parts = text.lower().split("x")
    if len(parts) != 2 or not all(p.isdigit() for p in parts):
        raise AlgebrotError(f"bad resolution: expected WxH, got {text!r}")
    return int(parts[0]), int(parts[1])


def _floor_for(source: AlgebraSource, budget: int = 100_000):
    if source.table is not None:
        return analysis.square_floor_2d(source.table, samples=budget)
    if source.algebra.dim <= 4:
        # certifying a positive floor in dimension 3..4 needs a finer grid
        budget = max(budget, 1_000_000)
    return analysis.square_floor_sampled(source.algebra, budget=budget)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="algebrot",
        description="escape-time dynamics of u^2 + c over real nonassociative algebras",
    )
    sub = parser.add_subparsers(dest="verb", required=True)

    p_analyze = sub.add_parser("analyze", help="print a classification report")
    p_analyze.add_argument("--algebra", required=True)
    p_analyze.add_argument("--budget", type=int, default=100_000,
                           help="square-floor sampling budget")
    p_analyze.add_argument("--samples", type=int, default=1_000,
                           help="square-property sample count")
    p_analyze.add_argument("--figure", default=None,
                           help="also render the report figure to this file")

    p_render = sub.add_parser("render", help="render an escape-time raster to PGM")
    p_render.add_argument("mode", choices=["julia", "mandelbrot"])
    p_render.add_argument("--algebra", required=True)
    p_render.add_argument("--window", required=True, help="xmin,xmax,ymin,ymax")
    p_render.add_argument("--res", required=True, help="WxH")
    p_render.add_argument("--max-iter", type=int, default=100)
    p_render.add_argument("--out", required=True)
    p_render.add_argument("--c", default=None, help="parameter for julia mode")
    p_render.add_argument("--origin", default=None)
    p_render.add_argument("--axis1", default=None)
    p_render.add_argument("--axis2", default=None)
    p_render.add_argument("--workers", type=int, default=1)
    p_render.add_argument("--budget", type=int, default=100_000,
                          help="square-floor sampling budget")
    p_render.add_argument("--uncertified", action="store_true",
                          help="render with a heuristic bailout when no floor exists")
    p_render.add_argument("--bailout", type=float, default=dynamics.UNCERTIFIED_BAILOUT)

    p_orbit = sub.add_parser("orbit", help="print an orbit trace")
    p_orbit.add_argument("--algebra", required=True)
    p_orbit.add_argument("--c", required=True)
    p_orbit.add_argument("--u", required=True)
    p_orbit.add_argument("--steps", type=int, default=20)

    sub.add_parser("verify-paper",
                   help="run the built-in verification checklist")
    return parser


def _cmd_analyze(args) -> int:
    source = resolve_source(args.algebra)
    report = analysis.classify(
        source.algebra, floor_budget=args.budget, property_samples=args.samples
    )
    for line in analysis.report_lines(report, label=source.label):
        print(line)
    if args.figure is not None:
        from .figures import save_report_figure

        save_report_figure(source.algebra, report, args.figure, label=source.label)
        print(f"figure = {args.figure}")
    return EXIT_OK


def _slice_for(args, source: AlgebraSource) -> raster.SliceSpec:
    dim = source.algebra.dim
    given = [args.origin, args.axis1, args.axis2]
    if any(v is not None for v in given):
        if not all(v is not None for v in given):
            raise AlgebrotError("--origin, --axis1 and --axis2 must be given together")
        return raster.SliceSpec(
            origin=_parse_coords(args.origin, dim, "origin"),
            axis1=_parse_coords(args.axis1, dim, "axis1"),
            axis2=_parse_coords(args.axis2, dim, "axis2"),
        )
    if dim > 2:
        raise AlgebrotError(
            "algebras of dimension > 2 need an explicit --origin/--axis1/--axis2 slice"
        )
    return raster.SliceSpec.default(source.algebra)


def _cmd_render(args) -> int:
    source = resolve_source(args.algebra)
    mode = OrbitMode(args.mode)
    width, height = _parse_resolution(args.res)
    c = None
    if mode is OrbitMode.JULIA:
        if args.c is None:
            raise AlgebrotError("julia mode requires --c")
        c = _parse_coords(args.c, source.algebra.dim, "c")
    floor = _floor_for(source, args.budget)
    floor_value = floor.value if isinstance(floor, analysis.SquareFloor) else 0.0
    job = raster.RasterJob(
        algebra=source.algebra,
        mode=mode,
        slice=_slice_for(args, source),
        window=_parse_window(args.window),
        width=width,
        height=height,
        max_iter=args.max_iter,
        floor=floor if isinstance(floor, analysis.SquareFloor) else None,
        c=c,
        uncertified=args.uncertified,
        bailout=args.bailout,
    )
    if floor_value <= 0.0 and not args.uncertified:
        raise SquareInequalityUnavailable(
            "square floor is zero for this algebra; pass --uncertified to render anyway"
        )
    grid = raster.render(job, workers=args.workers)
    raster.write_pgm(grid, args.out)
    meta_path = Path(args.out).with_suffix(".meta")
    raster.write_meta(job, grid, meta_path)
    threshold, _ = raster._threshold(job)
    print(f"threshold = {threshold!r}")
    print(f"bounded_pixels = {grid.bounded_count}")
    print(f"out = {args.out}")
    print(f"meta = {meta_path}")
    return EXIT_OK


def _cmd_orbit(args) -> int:
    source = resolve_source(args.algebra)
    dim = source.algebra.dim
    c = _parse_coords(args.c, dim, "c")
    u = _parse_coords(args.u, dim, "u")
    try:
        trace = dynamics.orbit_trace(source.algebra, c, u, args.steps)
    except OrbitOverflow as exc:
        for step, point in enumerate(exc.trace, start=1):
            print(dynamics.format_trace_line(step, point))
        print(f"overflow at step {exc.step}: trace truncated")
        return EXIT_OK
    for step, point in enumerate(trace, start=1):
        print(dynamics.format_trace_line(step, point))
    return EXIT_OK


def _cmd_verify() -> int:
    from . import verify

    results = verify.run_all()
    for line in verify.format_results(results):
        print(line)
    return EXIT_OK if all(r.passed for r in results) else EXIT_VERIFY_FAILED


def main(argv: list[str] | None = None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    parser = _build_parser()
    args = parser.parse_args(_absorb_negative_values(list(argv)))
    try:
        if args.verb == "analyze":
            return _cmd_analyze(args)
        if args.verb == "render":
            return _cmd_render(args)
        if args.verb == "orbit":
            return _cmd_orbit(args)
        return _cmd_verify()
    except SquareInequalityUnavailable as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNCERTIFIED
    except (AlgebrotError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
