"""Command line entry point ``qaf``.

Results go to stdout as one JSON document; logs go to stderr.  Exit codes:
0 success, 1 solver non-convergence (or unverified factoring), 2 usage or
input error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import compiler, netlist
from .errors import BoundExceededError, ContractError, NonConvergenceError, QafError, StructuralError, UnsatisfiableError
from .factoring import FactorProblem, factor_qa, multiply_with_energy
from .gadgets import GADGETS, verify_gadget
from .io import dumps_circuit, dumps_ising, loads_circuit, loads_ising
from .ising import decode_register
from .solvers import AnnealSchedule, solve

log = logging.getLogger("qaf")

EXIT_OK, EXIT_NONCONVERGED, EXIT_USAGE = 0, 1, 2


class UsageError(QafError):
    pass


def _emit(doc) -> None:
    sys.stdout.write(json.dumps(doc, sort_keys=True) + "\n")


def _add_solver_flags(p: argparse.ArgumentParser, default_method: str = "sa") -> None:
    d = AnnealSchedule()
    p.add_argument("--method", choices=("exact", "sa", "sqa"), default=default_method)
    p.add_argument("--sweeps", type=int, default=d.sweeps)
    p.add_argument("--restarts", type=int, default=None,
                   help="annealing restarts (default 20 for sa, 1 for sqa)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--beta0", type=float, default=d.beta_start)
    p.add_argument("--beta1", type=float, default=d.beta_end)
    p.add_argument("--gamma0", type=float, default=d.gamma_start)
    p.add_argument("--gamma1", type=float, default=d.gamma_end)
    p.add_argument("--sqa-beta", type=float, default=d.sqa_beta)
    p.add_argument("--trotter", type=int, default=16)
    p.add_argument("--workers", type=int, default=1)


def _solver_options(args) -> dict:
    if args.method == "exact":
        return {}
    schedule = AnnealSchedule(args.sweeps, args.beta0, args.beta1, args.gamma0, args.gamma1, args.sqa_beta)
    opts = {"schedule": schedule, "workers": args.workers}
    if args.method == "sa":
        opts["restarts"] = 20 if args.restarts is None else args.restarts
    else:
        opts["restarts"] = 1 if args.restarts is None else args.restarts
        opts["trotter_slices"] = args.trotter
    return opts


def _parse_clamp(text: str) -> tuple[int, int]:
    try:
        q, s = text.split("=")
        q, s = int(q), int(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"clamp must look like 3=+1, got {text!r}") from None
    if s not in (-1, 1):
        raise argparse.ArgumentTypeError(f"clamp spin must be +1 or -1, got {text!r}")
    return q, s


def cmd_verify_gate(args) -> int:
    try:
        gadget = GADGETS[args.name]()
    except KeyError:
        raise UsageError(f"unknown gadget {args.name!r}; known: {', '.join(sorted(GADGETS))}") from None
    report = verify_gadget(gadget)
    _emit({"gadget": args.name, **report.to_dict()})
    return EXIT_OK if report.passed else EXIT_NONCONVERGED


def _generate(args) -> netlist.Circuit:
    if args.circuit == "multiplier":
        if args.p is None or args.q is None:
            raise UsageError("multiplier needs --p and --q")
        if args.p < 1 or args.q < 1:
            raise UsageError(f"multiplier widths must be >= 1, got --p {args.p} --q {args.q}")
        return netlist.multiplier(args.p, args.q)
    return netlist.GENERATORS[args.circuit]()


def cmd_build(args) -> int:
    circuit = _generate(args)
    max_degree = None if args.max_degree <= 0 else args.max_degree
    cm = compiler.compile(circuit, max_degree=max_degree, fuse=args.fuse)
    if args.output:
        Path(args.output).write_text(dumps_ising(cm.model))
    if args.netlist:
        Path(args.netlist).write_text(dumps_circuit(circuit))
    profile = compiler.HardwareProfile(max_degree=max_degree or compiler.DEFAULT_MAX_DEGREE)
    _emit({**cm.stats, "certified_ground_energy": cm.certified_ground_energy,
           "hardware_compliant": compiler.hardware_check(cm, profile).compliant})
    return EXIT_OK


def cmd_solve(args) -> int:
    model, clamps = loads_ising(Path(args.model).read_text())
    clamps.update(dict(args.clamp or []))
    cm = None
    if args.netlist:
        max_degree = None if args.max_degree <= 0 else args.max_degree
        cm = compiler.compile(loads_circuit(Path(args.netlist).read_text()), max_degree, args.fuse)
        if cm.model != model:
            raise UsageError("netlist sidecar does not compile to the given model")
    opts = _solver_options(args)
    if args.method != "exact":
        opts["seed"] = args.seed
    result = solve(model, clamps, args.method, **opts)
    doc = result.to_dict()
    status = EXIT_OK
    if cm is not None:
        doc["registers"] = {name: decode_register(result.best_state, qs)
                            for name, qs in cm.map.registers.items()}
        doc["certified_ground_energy"] = cm.certified_ground_energy
        doc["converged"] = result.best_energy <= cm.certified_ground_energy + 1e-9
        if not doc["converged"] and args.method != "exact":
            status = EXIT_NONCONVERGED
    _emit(doc)
    return status


def cmd_multiply(args) -> int:
    widths = None
    if args.pm is not None or args.pn is not None:
        widths = (args.pm or max(1, args.M.bit_length()), args.pn or max(1, args.N.bit_length()))
    product, e = multiply_with_energy(args.M, args.N, widths, method=args.method, seed=args.seed,
                             attempts=args.attempts, **_solver_options(args))
    _emit({"M": args.M, "N": args.N, "product": product, "energy": e})
    return EXIT_OK


def cmd_factor(args) -> int:
    prob = FactorProblem(args.P, args.pm, args.pn, args.force_odd, args.method, args.attempts,
                         args.seed, options=_solver_options(args))
    try:
        result = factor_qa(prob)
    except (NonConvergenceError, UnsatisfiableError) as exc:
        log.error("%s", exc)
        _emit({"P": args.P, "verified": False, "error": str(exc)})
        return EXIT_NONCONVERGED
    _emit(result.to_dict())
    return EXIT_OK if result.verified else EXIT_NONCONVERGED


def cmd_estimate(args) -> int:
    _emit(compiler.estimate_resources(args.bits).to_dict())
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qaf", description="Boolean-circuit Ising compiler and annealing solvers")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify-gate", help="enumerate a gadget and compare with its truth table")
    p.add_argument("name")
    p.set_defaults(func=cmd_verify_gate)

    p = sub.add_parser("build", help="generate and compile a circuit")
    p.add_argument("circuit", choices=("nor", "half-adder", "full-adder", "multiplier"))
    p.add_argument("--p", type=int)
    p.add_argument("--q", type=int)
    p.add_argument("-o", "--output")
    p.add_argument("--netlist")
    p.add_argument("--max-degree", type=int, default=compiler.DEFAULT_MAX_DEGREE,
                   help="fan-out bound; 0 disables fan-out insertion")
    p.add_argument("--fuse", action="store_true")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("solve", help="find low-energy states of a model file")
    p.add_argument("model")
    _add_solver_flags(p, "exact")
    p.add_argument("--clamp", type=_parse_clamp, action="append", metavar="I=S")
    p.add_argument("--netlist")
    p.add_argument("--max-degree", type=int, default=compiler.DEFAULT_MAX_DEGREE)
    p.add_argument("--fuse", action="store_true")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("multiply", help="run a compiled multiplier forwards")
    p.add_argument("M", type=int)
    p.add_argument("N", type=int)
    p.add_argument("--pm", type=int)
    p.add_argument("--pn", type=int)
    p.add_argument("--attempts", type=int, default=10)
    _add_solver_flags(p)
    p.set_defaults(func=cmd_multiply)

    p = sub.add_parser("factor", help="factor P by clamping a multiplier's product register")
    p.add_argument("P", type=int)
    p.add_argument("--pm", type=int)
    p.add_argument("--pn", type=int)
    p.add_argument("--force-odd", action=argparse.BooleanOptionalAction, default=None)
    p.add_argument("--attempts", type=int, default=50)
    _add_solver_flags(p)
    p.set_defaults(func=cmd_factor)

    p = sub.add_parser("estimate", help="qubit and chip budget for factoring a p-bit number")
    p.add_argument("--bits", type=int, required=True)
    p.set_defaults(func=cmd_estimate)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        return args.func(args)
    except NonConvergenceError as exc:
        log.error("%s", exc)
        return EXIT_NONCONVERGED
    except (UsageError, ContractError, StructuralError, BoundExceededError, OSError) as exc:
        log.error("%s", exc)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
