import argparse
import json
import math
import sys
from functools import lru_cache
from pathlib import Path
from typing import Optional, Sequence, Tuple

import numpy as np

from loewnerlab.analysis import check_capacity_bounds, lip_norm_estimate, self_similarity_residual
from loewnerlab.attributes import add_attributes
from loewnerlab.capture_dynamics import capture_scan, phase_inequality_margin
from loewnerlab.config import LabUserConfig
from loewnerlab.dense_builder import build_dense
from loewnerlab.fractal_curves import (
    FractalKind,
    half_sierpinski,
    hilbert,
    koch,
    positive_area_curve,
    sierpinski_arrowhead,
)
from loewnerlab.instance import init_lab, shutdown_lab
from loewnerlab.io_formats import (
    dumps_capture_csv,
    read_curve_json,
    read_driving_csv,
    read_number_list,
    render_curves_svg,
    write_curve_json,
    write_driving_csv,
    write_svg,
)
from loewnerlab.logs import log_error, log_info
from loewnerlab.loewner_core import DrivingFunction, RefinementPolicy, solve_trace
from loewnerlab.message import DomainError, LoewnerError, ParseError
from loewnerlab.types import LogLevel
from loewnerlab.verify import SUITES, run_suite
from loewnerlab.welding import extract_driving

BUILTIN_PREFIX = "builtin:"


@lru_cache(maxsize=8)
def _koch_driver(level: int) -> DrivingFunction:
    return extract_driving(koch(level, upright=True))


def builtin_driver(spec: str, T: float = 1.0, steps: int = 1000) -> Tuple[DrivingFunction, RefinementPolicy]:
    """
    Builtin families `name:parameter`: const:c, sqrt:k (k sqrt t), bubble:C (C sqrt(T - t)),
    bubble-base:C (C - C sqrt(1 - t/T)), sine:w (sin(w t)) and koch-approx:L.
    """
    name, _, raw = spec.partition(":")
    try:
        param = float(raw)
    except ValueError:
        raise ParseError(f"builtin {name!r} needs a numeric parameter, got {raw!r}") from None

    plain = RefinementPolicy()
    at_end = RefinementPolicy.landing_at(T)
    match name:
        case "const":
            return DrivingFunction.constant(param, T), plain
        case "sqrt":
            return DrivingFunction.from_callable(lambda t: param * math.sqrt(t), T, steps), plain
        case "bubble":
            fn = lambda t: param * math.sqrt(max(T - t, 0.0))  # noqa: E731
            return DrivingFunction.from_callable(fn, T, steps, at_end.singular_times), at_end
        case "bubble-base":
            fn = lambda t: param - param * math.sqrt(max(1 - t / T, 0.0))  # noqa: E731
            return DrivingFunction.from_callable(fn, T, steps, at_end.singular_times), at_end
        case "sine":
            return DrivingFunction.from_callable(lambda t: math.sin(param * t), T, steps), plain
        case "koch-approx":
            return _koch_driver(int(param)), plain
    raise ParseError(f"unknown builtin driver {name!r}")


def load_driver(source: str, T: float, steps: int) -> Tuple[DrivingFunction, RefinementPolicy]:
    if source.startswith(BUILTIN_PREFIX):
        return builtin_driver(source[len(BUILTIN_PREFIX) :], T, steps)
    return read_driving_csv(source), RefinementPolicy()


def _emit(payload) -> None:
    sys.stdout.write(json.dumps(payload) + "\n")


def cmd_trace(args: argparse.Namespace) -> int:
    driver, policy = load_driver(args.driver, args.T, args.steps)
    trace = solve_trace(driver, args.steps, policy)
    write_curve_json(trace.vertices, args.out_curve, trace.times)
    if args.out_svg:
        write_svg(render_curves_svg([trace.vertices]), args.out_svg)
    log_info("trace written", {"vertices": len(trace), "tip": trace.tip, "path": args.out_curve})
    return 0


def cmd_extract(args: argparse.Namespace) -> int:
    vertices, _ = read_curve_json(args.curve)
    driver = extract_driving(vertices, args.delta)
    write_driving_csv(driver, args.out_driver)
    log_info("driving function written", {"samples": len(driver), "T": driver.T})
    return 0


def cmd_fractal(args: argparse.Namespace) -> int:
    kind = FractalKind(args.kind.replace("-", "_"))
    match kind:
        case FractalKind.KOCH:
            curve = koch(args.level, upright=args.upright)
        case FractalKind.HILBERT:
            curve = hilbert(args.level)
        case FractalKind.ARROWHEAD:
            curve = sierpinski_arrowhead(args.level)
        case FractalKind.HALF_SIERPINSKI:
            curve = half_sierpinski(args.level)
        case FractalKind.POSITIVE_AREA:
            if not args.epsilons:
                raise DomainError("positive-area curves need --epsilons")
            curve, _ = positive_area_curve(args.level, read_number_list(args.epsilons))
    write_curve_json(curve, args.out_curve)
    if args.out_svg:
        write_svg(render_curves_svg([curve]), args.out_svg)
    log_info("fractal written", {"kind": kind.value, "level": args.level, "vertices": len(curve)})
    return 0


def cmd_analyze(args: argparse.Namespace) -> int:
    driver = read_driving_csv(args.driver)
    if args.lip_norm:
        report = lip_norm_estimate(driver)
        _emit({"estimate": report.estimate, "witness": list(report.witness), "scale_profile": report.scale_profile})
    elif args.self_similar:
        value_factor, time_factor = args.self_similar
        _emit({"residual": self_similarity_residual(driver, value_factor, time_factor)})
    else:
        report = check_capacity_bounds(driver, solve_trace(driver))
        _emit({
            "im_ratio": report.im_ratio,
            "drift_ratio": report.drift_ratio,
            "diameter": report.diameter,
            "ok": report.ok,
        })
    return 0


def cmd_capture(args: argparse.Namespace) -> int:
    driver, _ = load_driver(args.driver, args.T, args.steps)
    lo, hi = args.range
    records = capture_scan(driver, lo, hi, args.n)
    Path(args.out).write_text(dumps_capture_csv(records))
    log_info("capture scan written", {"captured": len(records), "path": args.out})
    return 0


def cmd_phase_margin(args: argparse.Namespace) -> int:
    value = phase_inequality_margin(args.M, args.epsilon)
    _emit({"M": args.M, "epsilon": args.epsilon, "margin": value, "negative": value < 0})
    return 0


def cmd_build_dense(args: argparse.Namespace) -> int:
    points, _ = read_curve_json(args.points)
    result = build_dense(points, args.tol)
    write_driving_csv(result.driver, args.out_driver)
    if args.out_curve:
        write_curve_json(result.trace.vertices, args.out_curve, result.trace.times)
    _emit({"T": result.driver.T, "norm": result.norm, "max_distance": float(np.max(result.distances))})
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    results = run_suite(args.suite)
    for result in results:
        status = "PASS" if result.passed else "FAIL"
        sys.stdout.write(f"[{status}] {result.name}: {result.detail}\n")
    failed = [r for r in results if not r.passed]
    return 1 if failed else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="loewnerlab", description="Numerical chordal Loewner laboratory.")
    parser.add_argument("--seed", type=int, default=0, help="Seed for randomized commands (default: 0)")
    parser.add_argument(
        "--log-level", default=LogLevel.INFO.value, choices=[level.value for level in LogLevel]
    )
    sub = parser.add_subparsers(dest="command", required=True)

    trace = sub.add_parser("trace", help="Compute the trace of a driving function")
    trace.add_argument("--driver", required=True, help="CSV file or builtin:NAME:PARAM")
    trace.add_argument("--steps", type=int, default=1000)
    trace.add_argument("--T", type=float, default=1.0, help="Horizon for builtin drivers")
    trace.add_argument("--out-curve", required=True)
    trace.add_argument("--out-svg")
    trace.set_defaults(handler=cmd_trace)

    extract = sub.add_parser("extract", help="Extract the driving function of a curve")
    extract.add_argument("--curve", required=True)
    extract.add_argument("--delta", type=float, required=True)
    extract.add_argument("--out-driver", required=True)
    extract.set_defaults(handler=cmd_extract)

    fractal = sub.add_parser("fractal", help="Generate a fractal polyline")
    fractal.add_argument(
        "--kind", required=True,
        choices=["koch", "hilbert", "arrowhead", "half-sierpinski", "positive-area"],
    )
    fractal.add_argument("--level", type=int, required=True)
    fractal.add_argument("--epsilons", help="JSON list of epsilons for positive-area")
    fractal.add_argument("--upright", action="store_true", help="Koch only: run from 0 to i")
    fractal.add_argument("--out-curve", required=True)
    fractal.add_argument("--out-svg")
    fractal.set_defaults(handler=cmd_fractal)

    analyze = sub.add_parser("analyze", help="Norms, self-similarity and capacity bounds")
    analyze.add_argument("--driver", required=True)
    mode = analyze.add_mutually_exclusive_group(required=True)
    mode.add_argument("--lip-norm", action="store_true")
    mode.add_argument("--self-similar", nargs=2, type=float, metavar=("A", "B"))
    mode.add_argument("--capacity-bounds", action="store_true")
    analyze.set_defaults(handler=cmd_analyze)

    capture = sub.add_parser("capture", help="Scan real points for capture")
    capture.add_argument("--driver", required=True)
    capture.add_argument("--range", nargs=2, type=float, required=True, metavar=("LO", "HI"))
    capture.add_argument("--n", type=int, required=True)
    capture.add_argument("--steps", type=int, default=2000)
    capture.add_argument("--T", type=float, default=1.0)
    capture.add_argument("--out", required=True)
    capture.set_defaults(handler=cmd_capture)

    phase = sub.add_parser("phase-margin", help="Evaluate the phase inequality margin")
    phase.add_argument("--M", type=float, required=True)
    phase.add_argument("--epsilon", type=float, required=True)
    phase.set_defaults(handler=cmd_phase_margin)

    dense = sub.add_parser("build-dense", help="Build a driver visiting points in order")
    dense.add_argument("--points", required=True, help="Curve JSON whose vertices are the points")
    dense.add_argument("--tol", type=float, default=1e-2)
    dense.add_argument("--out-driver", required=True)
    dense.add_argument("--out-curve")
    dense.set_defaults(handler=cmd_build_dense)

    verify = sub.add_parser("verify", help="Run acceptance suites")
    verify.add_argument("--suite", default="all", choices=[*SUITES, "all"])
    verify.set_defaults(handler=cmd_verify)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    init_lab(LabUserConfig(seed=args.seed, log_level=LogLevel(args.log_level)))
    try:
        return add_attributes({"command": args.command}, lambda: args.handler(args))
    except LoewnerError as e:
        log_error("command failed", {"command": args.command, "error": type(e).__name__})
        sys.stderr.write(str(e) + "\n")
        return 2
    finally:
        shutdown_lab()


if __name__ == "__main__":
    sys.exit(main())
