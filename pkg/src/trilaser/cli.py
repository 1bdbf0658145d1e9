"""Command-line interface.

Five subcommands cover the package's workflows: ``steady`` evaluates one
operating point, ``dynamics`` integrates the moment equations, ``sweep``
and ``grid`` scan the parameter space, and ``boundary`` locates the
population inversion where backward steering dies out.  Output is CSV or
JSON with a fixed schema; identical invocations produce byte-identical
files.  Exit codes: 0 success, 2 no stationary state (or a diverging
trajectory), 64 usage error, 74 output I/O failure.

Flags override an optional key=value config file (``--config``); keys use
the long flag names, unknown keys are rejected.
"""

from __future__ import annotations

import argparse
import sys
from typing import IO, Callable

from .dynamics import IntegrationConfig, MomentState, integrate
from .errors import (
    Diverged,
    InvalidParameter,
    InvalidSpec,
    NoStationaryState,
    StepTooLarge,
)
from .gaussian import EPS_STEER
from .laser import AtomCavityParams, LaserParams, derive_gain
from .sweep import (
    STATUS_OK,
    Axis,
    SweepSpec,
    Varied,
    evaluate_point,
    find_one_way_boundary,
    run_grid,
    run_sweep,
)
from .tableio import (
    format_float,
    write_records_csv,
    write_records_json,
    write_trajectory_csv,
    write_trajectory_json,
)

EXIT_OK = 0
EXIT_NO_STATIONARY = 2
EXIT_USAGE = 64
EXIT_IO = 74

#: config key -> (argparse dest, converter); keys are long flag names.
_CONFIG_KEYS: dict[str, tuple[str, Callable[[str], object]]] = {
    "gain": ("gain", float),
    "kappa": ("kappa", float),
    "eta": ("eta", float),
    "rho": ("rho", float),
    "epsilon": ("epsilon", float),
    "gamma": ("gamma", float),
    "param": ("param", str),
    "from": ("start", float),
    "to": ("stop", float),
    "steps": ("steps", int),
    "x": ("x", str),
    "y": ("y", str),
    "dt": ("dt", float),
    "tmax": ("tmax", float),
    "convergence-tol": ("convergence_tol", float),
    "stride": ("stride", int),
    "eps-steer": ("eps_steer", float),
    "threads": ("threads", int),
    "format": ("fmt", str),
    "output": ("output", str),
    "eta-min": ("eta_min", float),
    "eta-max": ("eta_max", float),
    "tol": ("tol", float),
}


class _Parser(argparse.ArgumentParser):
    """ArgumentParser that exits with the usage code on bad flags."""

    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_rate_flags(sub: argparse.ArgumentParser, with_eta: bool = True) -> None:
    sub.add_argument("-A", "--gain", type=float, help="gain A in kHz")
    sub.add_argument("-k", "--kappa", type=float, help="cavity decay rate in kHz")
    if with_eta:
        sub.add_argument("-e", "--eta", type=float, help="population inversion")
    sub.add_argument("--rho", type=float, help="atomic injection rate (kHz); with --epsilon/--gamma replaces -A")
    sub.add_argument("--epsilon", type=float, help="atom-cavity coupling (kHz)")
    sub.add_argument("--gamma", type=float, help="atomic decay rate (kHz)")


def _add_common_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--config", help="key=value file supplying flag defaults")
    sub.add_argument("--format", dest="fmt", choices=("csv", "json"), help="output format (default csv)")
    sub.add_argument("-o", "--output", help="output file path")
    sub.add_argument("--eps-steer", type=float, help="threshold below which steering counts as zero")


def build_parser() -> _Parser:
    parser = _Parser(
        prog="trilaser",
        description="Steady state, dynamics and parameter scans of a two-mode cascade laser.",
    )
    commands = parser.add_subparsers(
        dest="command", required=True, metavar="command", parser_class=_Parser
    )

    steady = commands.add_parser("steady", help="evaluate one operating point")
    _add_rate_flags(steady)
    _add_common_flags(steady)
    steady.set_defaults(func=cmd_steady)

    dynamics = commands.add_parser("dynamics", help="integrate the moment equations from vacuum")
    _add_rate_flags(dynamics)
    _add_common_flags(dynamics)
    dynamics.add_argument("--dt", type=float, help="time step in ms")
    dynamics.add_argument("--tmax", type=float, help="integration horizon in ms")
    dynamics.add_argument("--convergence-tol", type=float, help="derivative norm declaring convergence (default 1e-9)")
    dynamics.add_argument("--stride", type=int, help="record every N-th step (default 1)")
    dynamics.set_defaults(func=cmd_dynamics)

    sweep = commands.add_parser("sweep", help="vary one parameter, fix the others")
    sweep.add_argument("--param", choices=("eta", "kappa", "gain"), help="parameter to vary")
    sweep.add_argument("--from", dest="start", type=float, help="first value")
    sweep.add_argument("--to", dest="stop", type=float, help="last value")
    sweep.add_argument("--steps", type=int, help="number of samples (>= 2)")
    _add_rate_flags(sweep)
    _add_common_flags(sweep)
    sweep.add_argument("--threads", type=int, help="worker threads (default 1)")
    sweep.set_defaults(func=cmd_sweep)

    grid = commands.add_parser("grid", help="cross two parameter axes")
    grid.add_argument("--x", help="fast axis as name:start:end:steps")
    grid.add_argument("--y", help="slow axis as name:start:end:steps")
    _add_rate_flags(grid)
    _add_common_flags(grid)
    grid.add_argument("--threads", type=int, help="worker threads (default 1)")
    grid.set_defaults(func=cmd_grid)

    boundary = commands.add_parser("boundary", help="find where backward steering vanishes")
    _add_rate_flags(boundary, with_eta=False)
    boundary.add_argument("--eta-min", type=float, help="search interval start (default 0)")
    boundary.add_argument("--eta-max", type=float, help="search interval end (default 1)")
    boundary.add_argument("--tol", type=float, help="bisection width (default 1e-8)")
    _add_common_flags(boundary)
    boundary.set_defaults(func=cmd_boundary)

    return parser


def _parse_config_file(path: str) -> dict[str, str]:
    values: dict[str, str] = {}
    with open(path, "r", encoding="utf-8") as fp:
        for lineno, raw in enumerate(fp, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise InvalidSpec(f"{path}:{lineno}: expected key=value, got {line!r}")
            key, _, value = line.partition("=")
            values[key.strip().lower().replace("_", "-")] = value.strip()
    return values


def _merge_config(args: argparse.Namespace) -> None:
    """Fill unset flags from the config file; flags keep precedence."""
    if getattr(args, "config", None) is None:
        return
    for key, raw in _parse_config_file(args.config).items():
        if key not in _CONFIG_KEYS:
            raise InvalidSpec(f"unknown config key {key!r}")
        dest, convert = _CONFIG_KEYS[key]
        if not hasattr(args, dest) or getattr(args, dest) is not None:
            continue
        try:
            value = convert(raw)
        except ValueError:
            raise InvalidSpec(f"config key {key!r}: cannot parse {raw!r}")
        if dest == "fmt" and value not in ("csv", "json"):
            raise InvalidSpec(f"config key 'format' must be csv or json, got {raw!r}")
        setattr(args, dest, value)


def _default(args: argparse.Namespace, dest: str, value: object) -> None:
    if getattr(args, dest) is None:
        setattr(args, dest, value)


def _require(args: argparse.Namespace, dest: str, flag: str) -> None:
    if getattr(args, dest) is None:
        raise InvalidSpec(f"missing required flag {flag}")


def _atom_from_args(args: argparse.Namespace) -> AtomCavityParams | None:
    """AtomCavityParams when --rho/--epsilon/--gamma are given, else None."""
    derived = [args.rho, args.epsilon, args.gamma]
    if all(v is None for v in derived):
        return None
    if not all(v is not None for v in derived):
        raise InvalidSpec("--rho, --epsilon and --gamma must be given together")
    if args.gain is not None:
        raise InvalidSpec("give either -A/--gain or --rho/--epsilon/--gamma, not both")
    return AtomCavityParams(
        injection_rate_rho=args.rho,
        coupling_epsilon=args.epsilon,
        atomic_decay_gamma=args.gamma,
    )


def _gain_from_args(args: argparse.Namespace) -> float:
    """Direct -A value, or the gain derived from --rho/--epsilon/--gamma."""
    atom = _atom_from_args(args)
    if atom is not None:
        return derive_gain(atom)
    _require(args, "gain", "-A/--gain (or --rho/--epsilon/--gamma)")
    return args.gain


def _params_from_args(args: argparse.Namespace) -> LaserParams:
    _require(args, "kappa", "-k/--kappa")
    _require(args, "eta", "-e/--eta")
    atom = _atom_from_args(args)
    if atom is not None:
        return LaserParams.from_atomic(atom, kappa=args.kappa, eta=args.eta)
    _require(args, "gain", "-A/--gain (or --rho/--epsilon/--gamma)")
    return LaserParams(gain_A=args.gain, kappa=args.kappa, eta=args.eta)


def _forbid_varied_flag(args: argparse.Namespace, varied: Varied, context: str) -> None:
    flags = {
        Varied.ETA: [("eta", "-e/--eta")],
        Varied.KAPPA: [("kappa", "-k/--kappa")],
        Varied.GAIN: [
            ("gain", "-A/--gain"),
            ("rho", "--rho"),
            ("epsilon", "--epsilon"),
            ("gamma", "--gamma"),
        ],
    }
    for dest, flag in flags[varied]:
        if dest in args.explicit_flags:
            raise InvalidSpec(f"{flag} conflicts with {context} {varied.value}")


def _fixed_values(args: argparse.Namespace, fixed: set[Varied]) -> dict[Varied, float]:
    values: dict[Varied, float] = {}
    for varied in fixed:
        if varied is Varied.GAIN:
            values[varied] = _gain_from_args(args)
        elif varied is Varied.KAPPA:
            _require(args, "kappa", "-k/--kappa")
            values[varied] = args.kappa
        else:
            _require(args, "eta", "-e/--eta")
            values[varied] = args.eta
    return values


def _write_output(args: argparse.Namespace, writer: Callable[[IO[str]], None], require_file: bool) -> None:
    if args.output is None:
        if require_file:
            raise InvalidSpec("missing required flag -o/--output")
        writer(sys.stdout)
        return
    with open(args.output, "w", encoding="utf-8", newline="") as fp:
        writer(fp)


def _write_records(args: argparse.Namespace, records: list, require_file: bool) -> None:
    if args.fmt == "json":
        _write_output(args, lambda fp: write_records_json(records, fp), require_file)
    else:
        _write_output(args, lambda fp: write_records_csv(records, fp), require_file)
    failed = sum(1 for r in records if r.status != STATUS_OK)
    if failed:
        print(
            f"warning: {failed} of {len(records)} points have no stationary state",
            file=sys.stderr,
        )


def cmd_steady(args: argparse.Namespace) -> int:
    params = _params_from_args(args)
    record = evaluate_point(params, eps_steer=args.eps_steer)
    _write_records(args, [record], require_file=False)
    return EXIT_OK if record.status == STATUS_OK else EXIT_NO_STATIONARY


def cmd_dynamics(args: argparse.Namespace) -> int:
    params = _params_from_args(args)
    _require(args, "dt", "--dt")
    _require(args, "tmax", "--tmax")
    _default(args, "convergence_tol", 1e-9)
    _default(args, "stride", 1)
    config = IntegrationConfig(
        dt=args.dt,
        t_max=args.tmax,
        convergence_tol=args.convergence_tol,
        sample_stride=args.stride,
    )
    result = integrate(params, MomentState.vacuum(), config)
    if args.fmt == "json":
        _write_output(
            args,
            lambda fp: write_trajectory_json(result.times, result.states, fp),
            require_file=True,
        )
    else:
        _write_output(
            args,
            lambda fp: write_trajectory_csv(result.times, result.states, fp),
            require_file=True,
        )
    if not result.converged:
        print(
            f"warning: not converged within tmax = {args.tmax:g} ms",
            file=sys.stderr,
        )
    return EXIT_OK


def cmd_sweep(args: argparse.Namespace) -> int:
    _require(args, "param", "--param")
    _require(args, "start", "--from")
    _require(args, "stop", "--to")
    _require(args, "steps", "--steps")
    _default(args, "threads", 1)
    varied = Varied(args.param)
    _forbid_varied_flag(args, varied, "--param")
    fixed = _fixed_values(args, {v for v in Varied} - {varied})
    spec = SweepSpec(
        varied=varied,
        start=args.start,
        end=args.stop,
        steps=args.steps,
        fixed=fixed,
    )
    records = run_sweep(spec, eps_steer=args.eps_steer, threads=args.threads)
    _write_records(args, records, require_file=True)
    return EXIT_OK


def _parse_axis(text: str, flag: str) -> Axis:
    parts = text.split(":")
    if len(parts) != 4:
        raise InvalidSpec(f"{flag} must look like name:start:end:steps, got {text!r}")
    name, start, end, steps = parts
    try:
        varied = Varied(name)
    except ValueError:
        names = ", ".join(v.value for v in Varied)
        raise InvalidSpec(f"{flag}: unknown parameter {name!r} (expected one of {names})")
    try:
        return Axis(varied, float(start), float(end), int(steps))
    except ValueError:
        raise InvalidSpec(f"{flag}: cannot parse {text!r}")


def cmd_grid(args: argparse.Namespace) -> int:
    _require(args, "x", "--x")
    _require(args, "y", "--y")
    _default(args, "threads", 1)
    x_axis = _parse_axis(args.x, "--x")
    y_axis = _parse_axis(args.y, "--y")
    if x_axis.varied is y_axis.varied:
        raise InvalidSpec("--x and --y must vary different parameters")
    _forbid_varied_flag(args, x_axis.varied, "--x axis")
    _forbid_varied_flag(args, y_axis.varied, "--y axis")
    (remaining,) = {v for v in Varied} - {x_axis.varied, y_axis.varied}
    fixed = _fixed_values(args, {remaining})
    records = run_grid(
        x_axis, y_axis, fixed, eps_steer=args.eps_steer, threads=args.threads
    )
    _write_records(args, records, require_file=True)
    return EXIT_OK


def cmd_boundary(args: argparse.Namespace) -> int:
    gain = _gain_from_args(args)
    _require(args, "kappa", "-k/--kappa")
    _default(args, "eta_min", 0.0)
    _default(args, "eta_max", 1.0)
    _default(args, "tol", 1e-8)
    eta_star = find_one_way_boundary(
        gain_A=gain,
        kappa=args.kappa,
        eta_lo=args.eta_min,
        eta_hi=args.eta_max,
        eps_steer=args.eps_steer,
        tol=args.tol,
    )
    def writer(fp: IO[str]) -> None:
        if args.fmt == "json":
            value = "null" if eta_star is None else repr(eta_star)
            status = "not_found" if eta_star is None else "ok"
            fp.write(f'{{"eta_star": {value}, "status": "{status}"}}\n')
        else:
            fp.write("eta_star,status\n")
            if eta_star is None:
                fp.write("nan,not_found\n")
            else:
                fp.write(f"{format_float(eta_star)},ok\n")

    _write_output(args, writer, require_file=False)
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    args.explicit_flags = {
        dest
        for dest in vars(args)
        if dest not in ("func", "command", "explicit_flags")
        and getattr(args, dest) is not None
    }
    try:
        _merge_config(args)
        _default(args, "fmt", "csv")
        _default(args, "eps_steer", EPS_STEER)
        if getattr(args, "threads", None) is not None and args.threads < 1:
            raise InvalidSpec("--threads must be >= 1")
        return args.func(args)
    except (InvalidSpec, InvalidParameter, StepTooLarge) as exc:
        print(f"trilaser: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NoStationaryState, Diverged) as exc:
        print(f"trilaser: error: {exc}", file=sys.stderr)
        return EXIT_NO_STATIONARY
    except OSError as exc:
        print(f"trilaser: error: {exc}", file=sys.stderr)
        return EXIT_IO
