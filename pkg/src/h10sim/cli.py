"""Command-line front-end.

Exit codes for ``solve``: 0 solution exists, 1 no solution, 2 inconclusive.
Errors: 64 unparseable equation, 65 invalid configuration, 66 dense cap
exceeded, 70 anything else.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from . import adiabatic, fock, gates
from .hamiltonians import DenseCapExceeded, build_codec, build_initial_hamiltonian, build_problem_hamiltonian
from .poly import ParseError, brute_force_search, parse_polynomial

EXIT_CODES = {
    adiabatic.Verdict.SOLUTION_EXISTS: 0,
    adiabatic.Verdict.NO_SOLUTION: 1,
    adiabatic.Verdict.INCONCLUSIVE: 2,
}
EXIT_PARSE = 64
EXIT_CONFIG = 65
EXIT_CAP = 66
EXIT_INTERNAL = 70


class ConfigError(ValueError):
    pass


def parse_complex(text: str) -> complex:
    """Accept "2", "1.5+0.5i", "-0.3i" (``j`` also works)."""
    try:
        return complex(text.strip().replace(" ", "").replace("i", "j"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a complex literal: {text!r}") from None


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def _emit(obj, args, text: str | None = None):
    if args.json or text is None:
        print(json.dumps(obj, indent=2))
    else:
        print(text)


def _write(args, name: str, content: str):
    if args.output_dir:
        out = Path(args.output_dir)
        out.mkdir(parents=True, exist_ok=True)
        (out / name).write_text(content)


def _params(args):
    params = list(args.z or []) + list(args.alpha or [])
    return params or None


def _setup(args):
    algebra = fock.AlgebraKind.parse(args.algebra)
    poly = parse_polynomial(args.equation)
    if args.d < 2:
        raise ConfigError("d must be >= 2")
    try:
        params = adiabatic.resolve_params(_params(args), algebra, poly.k)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    return algebra, poly, params


def cmd_solve(args) -> int:
    algebra, poly, params = _setup(args)
    try:
        adiabatic.check_params(params, algebra)
        cfg = adiabatic.DecideConfig(
            d=args.d, params=params, T0=args.T0, T_growth=args.T_growth,
            T_cap=args.T_cap, steps_per_unit_time=args.steps_per_unit_time,
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    report = adiabatic.decide(poly, algebra, cfg)
    report.diagnostics["seed"] = args.seed
    text = report.dumps()
    print(text)
    _write(args, "run_report.json", text)
    _write(args, "trace.csv", report.trace_csv())
    return EXIT_CODES[report.verdict]


def cmd_oracle(args) -> int:
    poly = parse_polynomial(args.equation)
    if args.bound < 0:
        raise ConfigError("bound must be non-negative")
    witness = brute_force_search(poly, args.bound)
    obj = {"equation": args.equation, "bound": args.bound,
           "witness": list(witness) if witness is not None else None}
    _emit(obj, args, json.dumps(obj["witness"]))
    _write(args, "oracle.json", json.dumps(obj, indent=2))
    return 0 if witness is not None else 1


def cmd_gap(args) -> int:
    algebra, poly, params = _setup(args)
    if args.points < 2:
        raise ConfigError("need at least two grid points")
    codec = build_codec(poly.k, args.d)
    hD = build_problem_hamiltonian(poly, codec)
    hI = build_initial_hamiltonian(params, algebra, codec)
    trace = adiabatic.gap_scan(hI, hD, np.linspace(0.0, 1.0, args.points))
    csv_text = trace.to_csv()
    if args.json:
        print(json.dumps({"grid": trace.grid, "e0": trace.e0, "e1": trace.e1, "min_gap": trace.min_gap}, indent=2))
    else:
        sys.stdout.write(csv_text)
        print(f"# min_gap={_fmt(trace.min_gap)}")
    _write(args, "gap.csv", csv_text)
    return 0


def cmd_coherent(args) -> int:
    z = args.z_value
    state = fock.bg_state(z, args.d)
    n, prob = fock.max_basis_overlap(state)
    k_minus = fock.su11_generators(args.d)[0].matrix
    residual = float(np.linalg.norm(k_minus @ state.amps - z * state.amps))
    obj = {
        "z": [z.real, z.imag],
        "d": args.d,
        "norm_sq": state.norm_sq,
        "max_overlap_n": n,
        "max_overlap": prob,
        "closed_form_vacuum_overlap": fock.bg_vacuum_overlap(z),
        "eigen_residual": residual,
        "below_half": prob < 0.5,
    }
    text = "\n".join(f"{k:28s} {_fmt(v) if isinstance(v, float) else v}" for k, v in obj.items())
    _emit(obj, args, text)
    return 0


def cmd_gate_demo(args) -> int:
    if args.d < gates.MIN_DIM:
        raise ConfigError(f"gate demo needs d >= {gates.MIN_DIM}")
    obj = {
        "d": args.d,
        "coding": args.coding,
        "mappings": gates.basis_mappings(args.d, args.coding),
        "truth_table": gates.truth_table(args.d, args.coding),
    }
    print(json.dumps(obj, indent=2))
    return 0


def _add_globals(p: argparse.ArgumentParser, suppress: bool):
    d = argparse.SUPPRESS if suppress else None
    p.add_argument("--output-dir", default=d, help="directory for report/trace files")
    p.add_argument("--json", action="store_true", default=argparse.SUPPRESS if suppress else False)
    p.add_argument("--seed", type=int, default=argparse.SUPPRESS if suppress else 0)


def _add_run_options(p: argparse.ArgumentParser, default_d: int):
    p.add_argument("equation", help='e.g. "x^2 + y^2 - 5 = 0"')
    p.add_argument("--algebra", default="su11", choices=["su11", "wh"])
    p.add_argument("--d", type=int, default=default_d, help="Fock levels per mode")
    p.add_argument("--z", type=parse_complex, action="append", help="Barut-Girardello parameter (repeat per mode)")
    p.add_argument("--alpha", type=parse_complex, action="append", help="Glauber parameter (repeat per mode)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="h10sim", description=__doc__.splitlines()[0])
    _add_globals(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="run the adiabatic decision procedure")
    _add_run_options(p, 16)
    p.add_argument("--T0", type=float, default=10.0)
    p.add_argument("--T-growth", dest="T_growth", type=float, default=2.0)
    p.add_argument("--T-cap", dest="T_cap", type=float, default=1e4)
    p.add_argument("--steps-per-unit-time", type=float, default=20.0)
    _add_globals(p, suppress=True)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("oracle", help="exhaustive root search in a box")
    p.add_argument("equation")
    p.add_argument("--bound", type=int, required=True)
    _add_globals(p, suppress=True)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("gap", help="dense spectral-gap scan along the schedule")
    _add_run_options(p, 16)
    p.add_argument("--points", type=int, default=21)
    _add_globals(p, suppress=True)
    p.set_defaults(func=cmd_gap)

    p = sub.add_parser("coherent", help="Barut-Girardello state diagnostics")
    p.add_argument("--z", dest="z_value", type=parse_complex, default=complex(2.0))
    p.add_argument("--d", type=int, default=64)
    _add_globals(p, suppress=True)
    p.set_defaults(func=cmd_coherent)

    p = sub.add_parser("gate-demo", help="CNOT^inf on the coded two-qubit subspace")
    p.add_argument("--d", type=int, default=gates.MIN_DIM)
    p.add_argument("--coding", choices=["superposed", "eigen"], default="superposed")
    _add_globals(p, suppress=True)
    p.set_defaults(func=cmd_gate_demo)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (ConfigError, adiabatic.HaltingBoundError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DenseCapExceeded as exc:
        print(f"dense cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAP
    except Exception as exc:  # noqa: BLE001
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
