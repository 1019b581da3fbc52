"""Command line interface.

Exit codes: 0 success or affirmative verdict, 1 negative verdict, 2 input
error (including argument errors).
"""

from __future__ import annotations

import argparse
import ast
import csv
import json
import operator
import sys

import numpy as np

from .bound import certify
from .errors import StateError
from .nonlocality import brute_force_nonlocality, nonlocality
from .qmat import DEFAULT_TOLERANCES, Tolerances
from .shared import shared_conditions
from .stateio import density_to_json, pure_to_json, read_state
from .states import gamma_state, lambda_state, omega_state, phi_state, random_density, vw_state

ORACLE_LIMIT = 1e-3

FAMILIES = {
    "gamma": "gamma", "γ": "gamma",
    "omega": "omega", "ω": "omega",
    "lambda": "lambda", "λ": "lambda",
    "phi": "phi", "φ": "phi",
    "vw": "vw",
}

_BINOPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul, ast.Div: operator.truediv}


def parse_angle(text: str) -> float:
    """Evaluate arithmetic such as ``"pi/8"`` or ``"3*pi/8"`` or ``"0.25"``."""

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            return float(node.value)
        if isinstance(node, ast.Name) and node.id in ("pi", "π"):
            return float(np.pi)
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            return _BINOPS[type(node.op)](ev(node.left), ev(node.right))
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            value = ev(node.operand)
            return -value if isinstance(node.op, ast.USub) else value
        raise ValueError

    try:
        value = ev(ast.parse(text.strip().replace("π", "pi"), mode="eval"))
    except (SyntaxError, ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"invalid angle expression: {text!r}") from None
    if not np.isfinite(value):
        raise argparse.ArgumentTypeError(f"invalid angle expression: {text!r}")
    return value


def _grid(text: str) -> int:
    value = int(text)
    if value < 8:
        raise argparse.ArgumentTypeError(f"grid must be at least 8, got {value}")
    return value


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def _fixed(x: float) -> str:
    # keep -0.000000 out of reports
    return f"{0.0 if abs(x) < 5e-7 else x:.6f}"


def _vec(v) -> str:
    return " ".join(_fixed(x) for x in v)


def _tolerances(args) -> Tolerances:
    if getattr(args, "tol", None) is None:
        return DEFAULT_TOLERANCES
    return Tolerances(compare_tol=args.tol)


def analysis_record(rho, tol: Tolerances = DEFAULT_TOLERANCES) -> dict:
    q = certify(rho, tol)
    rep = nonlocality(rho, tol)
    s = rep.setting
    return {
        "C": q.concurrence,
        "eof": q.eof,
        "N": q.nonlocality,
        "bound": q.bound,
        "slack": q.slack,
        "member": q.operational_member,
        "structural_member": q.structural_member,
        "lambda1": rep.lambda1,
        "lambda2": rep.lambda2,
        "a": s.a.tolist(),
        "a_prime": s.a2.tolist(),
        "b": s.b.tolist(),
        "b_prime": s.b2.tolist(),
    }


def cmd_analyze(args) -> int:
    tol = _tolerances(args)
    rho = read_state(args.state_file, tol)
    rec = analysis_record(rho, tol)
    if args.json:
        print(json.dumps({"state": args.state_file, **rec}, indent=2))
        return 0
    print(f"state={args.state_file}")
    for key in ("C", "eof", "N", "bound", "slack"):
        label = "EoF" if key == "eof" else key
        print(f"{label}={_fixed(rec[key])}")
    print(f"member={'true' if rec['member'] else 'false'}")
    print(f"lambda1={_fixed(rec['lambda1'])}")
    print(f"lambda2={_fixed(rec['lambda2'])}")
    for key, label in (("a", "a"), ("a_prime", "a'"), ("b", "b"), ("b_prime", "b'")):
        print(f"{label}={_vec(rec[key])}")
    return 0


def scan_rows(count: int, seed: int, rank: int, tol: Tolerances = DEFAULT_TOLERANCES):
    rng = np.random.default_rng(seed)
    for i in range(count):
        q = certify(random_density(rng, rank), tol)
        yield i, q.concurrence, q.eof, q.nonlocality, q.bound, q.slack


def cmd_scan(args) -> int:
    tol = _tolerances(args)
    out = sys.stdout if args.out == "-" else open(args.out, "w", newline="")
    try:
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["id", "C", "eof", "N", "bound", "slack"])
        for row in scan_rows(args.count, args.seed, args.rank, tol):
            writer.writerow([row[0], *(format(x, ".17g") for x in row[1:])])
    finally:
        if out is not sys.stdout:
            out.close()
    return 0


def cmd_pair_check(args) -> int:
    tol = _tolerances(args)
    rho = read_state(args.state_file_1, tol)
    varrho = read_state(args.state_file_2, tol)
    v = shared_conditions(rho, varrho, tol)
    d = v.details
    print(f"same_frames={str(v.cond_same_frames).lower()} residual={d['frame_residual']:.3e}")
    print(f"same_order={str(v.cond_same_order).lower()} residual={d['order_residual']:.3e}")
    print(f"ratio={str(v.cond_ratio).lower()} residual={d['ratio_residual']:.3e}")
    print(f"degenerate_path={str(v.degenerate_path).lower()}")
    print(f"certificate={str(v.certificate).lower()} gap={d['certificate_gap']:.3e}")
    if v.operator is not None:
        for row in v.operator.W:
            print("W " + _vec(row))
    return 0 if v.certificate else 1


def cmd_oracle_compare(args) -> int:
    if args.state:
        states = [read_state(path) for path in args.state]
    else:
        rng = np.random.default_rng(args.seed)
        states = [random_density(rng, int(rng.integers(1, 5))) for _ in range(args.count)]
    diffs = []
    print("id,analytic,oracle,diff")
    for i, rho in enumerate(states):
        analytic = nonlocality(rho).value
        oracle = brute_force_nonlocality(rho, args.grid, args.refine, seed=args.seed + i)
        diffs.append(abs(analytic - oracle))
        print(f"{i},{analytic:.9f},{oracle:.9f},{diffs[-1]:.3e}")
    worst = max(diffs)
    print(f"max_diff={worst:.3e} mean_diff={np.mean(diffs):.3e} states={len(diffs)}")
    return 0 if worst <= ORACLE_LIMIT else 1


def cmd_make(args, parser) -> int:
    family = FAMILIES[args.family]
    if args.delta not in (1, -1):
        parser.error(f"--delta must be +1 or -1, got {args.delta}")
    if family == "vw":
        if args.p is None:
            parser.error("--family vw requires --p")
        if not 0 <= args.p <= 1:
            parser.error(f"--p must lie in [0, 1], got {args.p}")
        obj = density_to_json(vw_state(args.p, args.theta))
    else:
        builders = {
            "gamma": lambda: gamma_state(args.theta),
            "omega": lambda: omega_state(args.theta),
            "lambda": lambda: lambda_state(args.theta, args.delta),
            "phi": lambda: phi_state(args.theta, args.delta),
        }
        obj = pure_to_json(builders[family]())
    text = json.dumps(obj, indent=2) + "\n"
    if args.out == "-":
        sys.stdout.write(text)
    else:
        with open(args.out, "w") as fh:
            fh.write(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chshbound",
        description="Entanglement and CHSH nonlocality of two-qubit states.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="concurrence, nonlocality, bound slack and optimal settings")
    p.add_argument("state_file")
    p.add_argument("--tol", type=float, default=None, help="comparison tolerance (default 1e-8)")
    p.add_argument("--json", action="store_true", help="machine-readable output")

    p = sub.add_parser("scan", help="CSV of random states")
    p.add_argument("--count", type=_positive_int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--rank", type=int, choices=(1, 2, 3, 4), default=4)
    p.add_argument("--out", default="-", help="output path, '-' for stdout")
    p.add_argument("--tol", type=float, default=None)

    p = sub.add_parser("pair-check", help="do two states share an optimal CHSH operator?")
    p.add_argument("state_file_1")
    p.add_argument("state_file_2")
    p.add_argument("--tol", type=float, default=None)

    p = sub.add_parser("oracle-compare", help="analytic nonlocality against brute-force search")
    p.add_argument("--count", type=_positive_int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--grid", type=_grid, default=64)
    p.add_argument("--refine", type=int, default=50)
    p.add_argument("--state", action="append", help="compare on this state file (repeatable)")

    p = sub.add_parser("make", help="write a family state as JSON")
    p.add_argument("--family", required=True, choices=sorted(FAMILIES))
    p.add_argument("--theta", type=parse_angle, default=0.0, help="angle, e.g. 'pi/8'")
    p.add_argument("--delta", type=int, default=1)
    p.add_argument("--p", type=float, default=None)
    p.add_argument("--out", default="-")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "analyze":
            return cmd_analyze(args)
        if args.command == "scan":
            return cmd_scan(args)
        if args.command == "pair-check":
            return cmd_pair_check(args)
        if args.command == "oracle-compare":
            return cmd_oracle_compare(args)
        return cmd_make(args, parser)
    except StateError as exc:
        msg = str(exc)
        name = type(exc).__name__
        print(msg if msg.startswith(name) else f"{name}: {msg}", file=sys.stderr)
        return 2
    except ValueError as exc:
        # e.g. an invalid --tol
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
