"""Command-line entry point: ``detumble simulate | matrix | verdict``."""

from __future__ import annotations

import argparse
import sys

from . import __version__
from ._backend import BACKEND, available_backends
from .control import ControllerKind
from .errors import DetumbleError
from .harness import run_matrix
from .scenario_io import emit_plot, parse_scenario, read_csv, render_scenario, scenario_values, write_csv
from .simulation import ScenarioConfig, propagate
from .spacecraft import canonical_preset, parse_actuation
from .telemetry import DEFAULT_SUCCESS_THRESHOLD, DEFAULT_WINDOW_FRACTION, detumble_verdict

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2


def _preset_arg(text):
    try:
        return canonical_preset(text)
    except DetumbleError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _controller_arg(text):
    try:
        return ControllerKind.parse(text)
    except DetumbleError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _actuation_arg(text):
    try:
        parse_actuation(text)
    except DetumbleError as exc:
        raise argparse.ArgumentTypeError(str(exc))
    return text


def _positive(text):
    value = float(text)
    if not value > 0.0:
        raise argparse.ArgumentTypeError(f"must be > 0, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="detumble", description="CubeSat detumbling simulator.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--backend", choices=available_backends(), default=None,
                        help=f"plant kernel (default: {BACKEND})")
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="fly one scenario")
    sim.add_argument("--scenario", help="scenario file (key = value lines)")
    sim.add_argument("--cubesat", type=_preset_arg, help="1u | 2u-upright | 2u-sideways | 6u")
    sim.add_argument("--controller", type=_controller_arg, help="prop | fl | two-stage | none")
    sim.add_argument("--actuation", type=_actuation_arg, help="full | under")
    sim.add_argument("--dt", type=_positive)
    sim.add_argument("--duration", type=_positive)
    sim.add_argument("--out", help="telemetry CSV path ('-' for stdout)")
    sim.add_argument("--plot", metavar="PREFIX", help="write PREFIX_rates.svg and PREFIX_moments.svg")
    sim.add_argument("--print-scenario", action="store_true", help="echo the resolved scenario to stderr")
    _verdict_flags(sim)

    mat = sub.add_parser("matrix", help="run every configuration/controller cell")
    mat.add_argument("--out", help="verdict CSV path ('-' or omitted for stdout)")
    mat.add_argument("--jobs", type=int, default=1)
    mat.add_argument("--check", action="store_true",
                     help="exit 1 unless the success pattern matches the reference table")
    mat.add_argument("--threshold", type=_positive, default=DEFAULT_SUCCESS_THRESHOLD)
    mat.add_argument("--window", type=_positive, default=DEFAULT_WINDOW_FRACTION)

    ver = sub.add_parser("verdict", help="judge an existing telemetry CSV")
    ver.add_argument("--in", dest="infile", required=True, help="telemetry CSV ('-' for stdin)")
    _verdict_flags(ver)
    return parser


def _verdict_flags(p):
    p.add_argument("--threshold", type=_positive, default=DEFAULT_SUCCESS_THRESHOLD,
                   help="success bound on every body rate (rad/s)")
    p.add_argument("--window", type=_positive, default=DEFAULT_WINDOW_FRACTION,
                   help="fraction of the run, at the end, that must stay under the bound")
    p.add_argument("--require-success", action="store_true", help="exit 1 if the run did not detumble")


def _open_out(path):
    if path in (None, "-"):
        return sys.stdout, False
    return open(path, "w", encoding="utf-8", newline=""), True


def _scenario_from_args(args) -> ScenarioConfig:
    values = {}
    if args.scenario:
        with open(args.scenario, encoding="utf-8") as fh:
            values = scenario_values(fh.read())
    if args.cubesat:
        values["cubesat"] = args.cubesat
    if args.controller:
        values["controller"] = args.controller.value
    if args.actuation:
        values["actuation"] = args.actuation
    if args.dt is not None:
        values["dt"] = repr(args.dt)
    if args.duration is not None:
        values["duration"] = repr(args.duration)
    return parse_scenario("\n".join(f"{k} = {v}" for k, v in values.items()))


def _summary(v) -> str:
    parts = [
        "success" if v.success else "FAILED",
        f"final_max_rate={v.final_max_rate:.6g} rad/s",
        f"time_to_converge={'-' if v.time_to_converge is None else format(v.time_to_converge, '.4g')}",
    ]
    if v.stage_switch_times:
        parts.append("stage_switches=" + ",".join(f"{t:.4g}" for t in v.stage_switch_times))
    if v.error:
        parts.append(f"error={v.error}")
    return " ".join(parts)


def _cmd_simulate(args) -> int:
    scenario = _scenario_from_args(args)
    if args.print_scenario:
        sys.stderr.write(render_scenario(scenario))
    result = propagate(scenario, backend=args.backend)
    if args.out:
        fh, close = _open_out(args.out)
        try:
            write_csv(result, fh)
        finally:
            if close:
                fh.close()
    if args.plot:
        for channels in ("rates", "moments"):
            with open(f"{args.plot}_{channels}.svg", "w", encoding="utf-8") as fh:
                emit_plot(result, channels, fh)
    verdict = detumble_verdict(result, args.threshold, args.window)
    print(_summary(verdict), file=sys.stderr if args.out == "-" else sys.stdout)
    if args.require_success and not verdict.success:
        return EXIT_FAILED
    return EXIT_OK


def _cmd_matrix(args) -> int:
    matrix = run_matrix(backend=args.backend, success_threshold=args.threshold,
                        window_fraction=args.window, jobs=max(1, args.jobs))
    fh, close = _open_out(args.out)
    try:
        matrix.to_csv(fh)
    finally:
        if close:
            fh.close()
    bad = matrix.mismatches()
    if bad:
        print("cells differing from the reference table: " + "; ".join("/".join(c) for c in bad), file=sys.stderr)
    if args.check and bad:
        return EXIT_FAILED
    return EXIT_OK


def _cmd_verdict(args) -> int:
    if args.infile == "-":
        result = read_csv(sys.stdin)
    else:
        with open(args.infile, encoding="utf-8", newline="") as fh:
            result = read_csv(fh)
    if not result.records:
        raise DetumbleError("telemetry file has no records")
    verdict = detumble_verdict(result, args.threshold, min(1.0, args.window))
    print(_summary(verdict))
    if args.require_success and not verdict.success:
        return EXIT_FAILED
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    handlers = {"simulate": _cmd_simulate, "matrix": _cmd_matrix, "verdict": _cmd_verdict}
    try:
        return handlers[args.command](args)
    except (DetumbleError, OSError, ValueError) as exc:
        print(f"detumble: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
