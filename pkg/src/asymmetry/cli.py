"""Command-line interface: ``asymmetry measure | reproduce | check-channel``.

Exit codes: 0 success/pass, 1 numerical failure or failed check, 2 usage or
validation error. Without ``--seed`` every command uses seed 0.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from datetime import datetime, timezone
from typing import Any, Sequence

import numpy as np

from . import __version__, experiments, groups, measures, quantum
from .errors import AsymmetryError, UnknownInstance, ValidationError, ZeroAsymmetry
from .experiments import round12
from .groups import FINITE, SU2, U1, Representation

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


# --------------------------------------------------------------------------
# group specifiers


def parse_group(spec: str) -> Representation:
    """Build a representation from a flat specifier.

    ``regular:N``      left regular representation of Z_N
    ``z_n:N``          Z_N acting by phases exp(2 pi i k m / N), m = 0..N-1
    ``u1:0,1,2``       U(1) with the given number spectrum
    ``su2:j``          spin-j
    ``trivial:KIND:D`` D-dimensional trivial representation (KIND in u1, su2)
    ``tensor:A*B``     tensor product of two specifiers
    """
    kind, _, arg = spec.partition(":")
    try:
        if kind == "tensor":
            parts = arg.split("*")
            if len(parts) < 2:
                raise ValidationError("tensor: needs at least two factors separated by '*'")
            R = parse_group(parts[0])
            for p in parts[1:]:
                R = groups.tensor_representation(R, parse_group(p))
            return R
        if kind == "regular":
            return groups.left_regular_representation(groups.cyclic_group(int(arg)))
        if kind == "z_n":
            n = int(arg)
            return groups.cyclic_generator_representation(groups.cyclic_group(n), np.diag(np.arange(n, dtype=float)))
        if kind == "u1":
            return groups.u1_number_representation([int(x) for x in arg.split(",")])
        if kind == "su2":
            return groups.spin_j_representation(float(arg))
        if kind == "trivial":
            sub, _, dim = arg.partition(":")
            if sub not in (U1, SU2):
                raise ValidationError("trivial: supports u1 and su2")
            return groups.trivial_representation(sub, int(dim))
    except ValueError as exc:
        if isinstance(exc, ValidationError):
            raise
        raise ValidationError(f"bad group specifier {spec!r}: {exc}") from exc
    raise ValidationError(f"unknown group specifier {spec!r}")


def parse_element(R: Representation, text: str):
    if R.kind == FINITE:
        if text in R.group.labels:
            return R.group.labels.index(text)
        g = int(text)
        if not 0 <= g < R.group.order:
            raise ValidationError(f"element {g} out of range")
        return g
    if R.kind == U1:
        return float(text)
    axis_txt, _, theta = text.rpartition(":")
    axes = {"x": (1.0, 0.0, 0.0), "y": (0.0, 1.0, 0.0), "z": (0.0, 0.0, 1.0)}
    axis = axes.get(axis_txt) or tuple(float(v) for v in axis_txt.split(","))
    if len(axis) != 3:
        raise ValidationError("SU(2) elements are AXIS:THETA with AXIS in x|y|z or 'nx,ny,nz'")
    return (axis, float(theta))


def parse_density(R: Representation, text: str) -> groups.GroupDensity | None:
    """``uniform`` (exact), ``uniform:RES`` (quadrature) or ``z-axis:RES``; None means exact uniform."""
    kind, _, res = text.partition(":")
    if kind == "uniform":
        return None if not res else groups.uniform_density(R, int(res))
    if kind == "z-axis":
        return groups.subgroup_density_z_axis(R, int(res or 1))
    raise ValidationError(f"unknown density {text!r}")


def pick_generator(R: Representation, name: str | None) -> np.ndarray:
    if not R.is_lie:
        raise ValidationError("generator-based measures need a u1 or su2 representation")
    name = name or ("n" if R.kind == U1 else "z")
    if name not in R.generators:
        raise ValidationError(f"generator {name!r} not available; choose from {sorted(R.generators)}")
    return R.generators[name]


# --------------------------------------------------------------------------
# files


def load_json(path: str) -> Any:
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ValidationError(f"cannot read {path}: {exc}") from exc


def write_json_atomic(path: str, doc: Any) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=".json")
    try:
        with os.fdopen(fd, "w") as fh:
            json.dump(doc, fh, indent=2, sort_keys=True)
            fh.write("\n")
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def report_file(argv: Sequence[str], seed: int, payload: dict[str, Any], started: str) -> dict[str, Any]:
    return {
        "tool_version": __version__,
        "command": list(argv),
        "seed": seed,
        "payload": round12(payload),
        "timestamps": {"started": started, "finished": _now()},
    }


def _now() -> str:
    return datetime.now(timezone.utc).isoformat()


# --------------------------------------------------------------------------
# commands


def cmd_measure(args) -> tuple[int, dict[str, Any]]:
    R = parse_group(args.group)
    rho = quantum.state_from_dict(load_json(args.state))
    if rho.dim != R.dim:
        raise ValidationError(f"state dimension {rho.dim} does not match group representation dimension {R.dim}")
    params: dict[str, Any] = {"group": args.group}
    m = args.measure
    if m == "holevo":
        p = parse_density(R, args.density)
        params["density"] = args.density
        value: Any = measures.holevo_asymmetry(rho, R, p)
    elif m == "commutator":
        params["generator"] = args.generator
        value = measures.commutator_asymmetry(rho, pick_generator(R, args.generator))
    elif m == "skew":
        params.update(generator=args.generator, s=args.s)
        value = measures.skew_information(rho, pick_generator(R, args.generator), args.s)
    elif m == "cramer-rao":
        params["generator"] = args.generator
        try:
            value = measures.cramer_rao_bound_value(rho, pick_generator(R, args.generator))
        except ZeroAsymmetry:
            value = float("inf")
    elif m == "moments":
        params.update(generator=args.generator, k_max=args.k_max)
        value = measures.noether_moments(rho, pick_generator(R, args.generator), args.k_max).tolist()
    elif m == "trace-distance":
        g = _single_element(R, args)
        params["element"] = args.element[0]
        value = measures.trace_distance_asymmetry(rho, R, g)
    elif m == "renyi":
        params["s"] = args.s
        if args.state2:
            params["state2"] = args.state2
            value = measures.renyi_divergence(rho, quantum.state_from_dict(load_json(args.state2)), args.s)
        else:
            params["element"] = args.element[0] if args.element else None
            value = measures.renyi_asymmetry(rho, R, _single_element(R, args), args.s)
    elif m == "char":
        if args.element:
            elements = [parse_element(R, e) for e in args.element]
        elif R.kind == FINITE:
            elements = list(range(R.group.order))
        elif R.kind == U1:
            elements = [2 * np.pi * k / 64 for k in range(64)]
        else:
            raise ValidationError("char on su2 needs explicit --element values")
        params["elements"] = args.element or ("all" if R.kind == FINITE else "64-point grid")
        value = [[float(z.real), float(z.imag)] for z in measures.characteristic_function(rho, R, elements)]
    else:  # argparse restricts choices
        raise ValidationError(f"unknown measure {m!r}")
    result = measures.MeasureResult(m, value, measures.state_digest(rho), params)
    print(json.dumps(round12(value)))
    return EXIT_OK, result.to_dict()


def _single_element(R: Representation, args):
    if not args.element:
        raise ValidationError("this measure needs --element")
    return parse_element(R, args.element[0])


def run_experiment(exp_id: str, seed: int) -> experiments.ExperimentReport:
    name, _, rest = exp_id.partition(":")
    try:
        if name == "spin-example" and not rest:
            return experiments.spin_example_report()
        if name == "triviality":
            return experiments.triviality_demo(int(rest or 8), seed)
        if name == "amplifier":
            return experiments.amplifier_bound_check(int(rest or 100), seed)
        if name == "interconversion" and not rest:
            return experiments.interconversion_report()
        if name == "monotonicity":
            instance, measure, trials = rest.split(":")
            return experiments.monotonicity_suite(instance, measure, int(trials), seed)
    except ValueError as exc:
        if isinstance(exc, ValidationError):
            raise
        raise UnknownInstance(f"bad experiment id {exp_id!r}: {exc}") from exc
    raise UnknownInstance(f"unknown experiment id {exp_id!r}")


def cmd_reproduce(args) -> tuple[int, dict[str, Any]]:
    report = run_experiment(args.experiment, args.seed)
    payload = report.to_dict()
    for c in report.checks:
        print(f"[{'PASS' if c.passed else 'FAIL'}] {c.description}: {round12(c.actual)}")
    print(f"{report.name}: {'PASS' if report.passed else 'FAIL'}")
    return (EXIT_OK if report.passed else EXIT_FAIL), payload


def cmd_check_channel(args) -> tuple[int, dict[str, Any]]:
    E = quantum.channel_from_dict(load_json(args.channel))
    R_in = parse_group(args.group)
    R_out = parse_group(args.group_out) if args.group_out else R_in
    dev = quantum.covariance_deviation(E, R_in, R_out)
    ok = dev <= args.tol
    print(f"{'symmetric' if ok else 'not symmetric'}: max deviation {dev:.3e} (tol {args.tol:g})")
    payload = {"symmetric": ok, "max_deviation": dev, "tolerance": args.tol, "group": args.group}
    return (EXIT_OK if ok else EXIT_FAIL), payload


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="asymmetry", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", help="write the report JSON here")

    m = sub.add_parser("measure", parents=[common], help="evaluate an asymmetry measure on a state file")
    m.add_argument("--state", required=True)
    m.add_argument("--group", required=True)
    m.add_argument(
        "--measure",
        required=True,
        choices=["holevo", "commutator", "trace-distance", "renyi", "skew", "char", "moments", "cramer-rao"],
    )
    m.add_argument("--s", type=float, default=0.5)
    m.add_argument("--generator", choices=["x", "y", "z", "n"])
    m.add_argument("--density", default="uniform")
    m.add_argument("--element", action="append", help="group element; repeat for char")
    m.add_argument("--state2", help="second state for renyi")
    m.add_argument("--k-max", type=int, default=4)
    m.set_defaults(func=cmd_measure)

    r = sub.add_parser("reproduce", parents=[common], help="run a scripted experiment")
    r.add_argument(
        "experiment",
        help="spin-example | triviality:N | amplifier:T | monotonicity:INSTANCE:MEASURE:T | interconversion",
    )
    r.set_defaults(func=cmd_reproduce)

    c = sub.add_parser("check-channel", parents=[common], help="test a Kraus channel for covariance")
    c.add_argument("--channel", required=True)
    c.add_argument("--group", required=True)
    c.add_argument("--group-out", help="output representation if it differs from the input one")
    c.add_argument("--tol", type=float, default=1e-9)
    c.set_defaults(func=cmd_check_channel)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(argv)
    started = _now()
    try:
        code, payload = args.func(args)
    except ValidationError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except AsymmetryError as exc:
        print(f"numerical error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except ValueError as exc:  # malformed numbers in flags
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.out:
        write_json_atomic(args.out, report_file(argv, args.seed, payload, started))
    return code


if __name__ == "__main__":
    sys.exit(main())
