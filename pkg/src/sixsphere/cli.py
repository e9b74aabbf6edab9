"""Command-line interface.

Exit codes: 0 all checks pass, 1 some check fails, 2 usage or I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

import numpy as np

from . import flows
from .g2 import (
    NonCommutingError,
    basis_from_json,
    cartan_subalgebra,
    g2_basis,
    standard_torus,
)
from .hdw import hamiltonian_dim1_on_frame, hamiltonian_dim2_at
from .octonions import EPSILON, POSITIVE_TRIPLES, EpsilonTable
from .polynomials import fraction_str, parse_scalar
from .verify import Context, run_checks


class UsageError(Exception):
    pass


def corrupted_epsilon() -> EpsilonTable:
    """The structure tensor with one triple reversed (negative control)."""
    triples = list(POSITIVE_TRIPLES)
    i, j, k = triples[4]
    triples[4] = (i, k, j)
    return EpsilonTable(triples)


# argument parsing helpers -----------------------------------------------------


def parse_point(text: str) -> tuple:
    """Seven comma-separated scalars; "p/q" stays exact, decimals become floats."""
    try:
        vals = [parse_scalar(t.strip()) for t in text.split(",")]
    except (ValueError, ZeroDivisionError) as err:
        raise UsageError(f"cannot parse point {text!r}: {err}") from None
    if len(vals) != 7:
        raise UsageError(f"a point needs 7 coordinates, got {len(vals)}")
    norm2 = sum(v * v for v in vals)
    if all(isinstance(v, Fraction) for v in vals):
        if norm2 == 1:
            return tuple(vals)
    if abs(float(norm2) ** 0.5 - 1) > 1e-9:
        raise UsageError(f"point is off the unit sphere (|p| = {float(norm2) ** 0.5:.12g})")
    n = float(norm2) ** 0.5
    return tuple(float(v) / n for v in vals)


def parse_generator(token: str, eps: EpsilonTable = EPSILON):
    """A g2 element from a generator token.

    IDX (0..13) is a basis element, t1/t2 the standard torus, c1/c2 the
    computed Cartan pair, and "torus:a,b" the combination a*t1 + b*t2.
    """
    basis = g2_basis(eps)
    token = token.strip()
    if token.lstrip("-").isdigit():
        k = int(token)
        if not 0 <= k < len(basis):
            raise UsageError(f"basis index {k} outside 0..{len(basis) - 1}")
        return basis[k]
    if token in ("t1", "t2"):
        return standard_torus(basis)[int(token[1]) - 1]
    if token in ("c1", "c2"):
        return cartan_subalgebra(basis)[int(token[1]) - 1]
    if token.startswith("torus:"):
        try:
            a, b = (parse_scalar(x) for x in token[6:].split(","))
        except ValueError:
            raise UsageError(f"bad torus generator {token!r}") from None
        t1, t2 = standard_torus(basis)
        return [[a * x + b * y for x, y in zip(r1, r2)] for r1, r2 in zip(t1, t2)]
    raise UsageError(f"unknown generator {token!r}")


def load_generator_file(path: str, eps: EpsilonTable = EPSILON):
    """A 7x7 matrix from JSON: a bare matrix, {"matrix": ...} or a basis file
    with {"basis": [...], "index": k}."""
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, ValueError) as err:
        raise UsageError(f"cannot read generator file: {err}") from None
    if isinstance(data, dict) and "basis" in data:
        mats = basis_from_json(data)
        return mats[int(data.get("index", 0))]
    matrix = data["matrix"] if isinstance(data, dict) else data
    m = [[parse_scalar(str(x)) for x in row] for row in matrix]
    if len(m) != 7 or any(len(r) != 7 for r in m):
        raise UsageError("generator must be a 7x7 matrix")
    return m


def parse_grid(text: str) -> tuple[float, float, float]:
    try:
        t1, t2, d = (float(x) for x in text.lower().split("x"))
    except ValueError:
        raise UsageError(f"grid must look like T1xT2xD, got {text!r}") from None
    return t1, t2, d


def _fmt(x) -> str:
    return fraction_str(x) if isinstance(x, (int, Fraction)) else f"{x:.17g}"


# commands -------------------------------------------------------------------


def cmd_verify_all(args, eps: EpsilonTable) -> int:
    if args.samples < 1:
        raise UsageError("--samples must be at least 1")
    results = run_checks(Context(seed=args.seed, samples=args.samples, eps=eps))
    dim = len(g2_basis(eps))
    ok = all(r.passed for r in results)
    if args.json:
        print(json.dumps({
            "seed": args.seed,
            "samples": args.samples,
            "g2_dimension": dim,
            "checks": [r.as_dict() for r in results],
            "status": "PASS" if ok else "FAIL",
        }, indent=2))
    else:
        width = max(len(r.slug) for r in results)
        for r in results:
            print(f"{'PASS' if r.passed else 'FAIL'}  {r.slug:<{width}}  {r.detail}")
        print(f"g2 dimension: {dim}")
        print(f"{sum(r.passed for r in results)}/{len(results)} checks passed")
    return 0 if ok else 1


def cmd_g2_basis(args, eps: EpsilonTable) -> int:
    text = json.dumps(g2_basis(eps).to_json(), indent=1, sort_keys=True) + "\n"
    try:
        with open(args.out, "w") as fh:
            fh.write(text)
    except OSError as err:
        print(f"error: cannot write {args.out}: {err}", file=sys.stderr)
        return 2
    print(f"wrote {len(g2_basis(eps))} basis matrices to {args.out}")
    return 0


def _print_drift(rep: flows.DriftReport):
    for k, v in rep.as_dict().items():
        print(f"{k:<20} {v:.3e}")


def _write_traj(traj: flows.Trajectory, out: str | None, fmt: str):
    text = traj.to_csv() if fmt == "csv" else traj.to_json()
    if out is None:
        return
    try:
        with open(out, "w") as fh:
            fh.write(text)
    except OSError as err:
        raise UsageError(f"cannot write {out}: {err}") from None


def _generator(args, name: str, eps: EpsilonTable):
    file_arg = getattr(args, f"{name}_file", None)
    token = getattr(args, name)
    if file_arg:
        return load_generator_file(file_arg, eps)
    if token is None:
        raise UsageError(f"--{name} or --{name}-file is required")
    return parse_generator(token, eps)


def cmd_flow(args, eps: EpsilonTable) -> int:
    xi = _generator(args, "xi", eps)
    p = parse_point(args.point)
    try:
        traj = flows.flow_dim1(xi, p, args.t0, args.t1, args.dt, eps)
    except (flows.FlowError, ValueError) as err:
        raise UsageError(str(err)) from None
    _write_traj(traj, args.out, args.format)
    print(f"samples: {len(traj.times)}")
    rep = flows.drift_report(traj, eps)
    _print_drift(rep)
    return 0


def cmd_flow2(args, eps: EpsilonTable) -> int:
    xi, eta = _generator(args, "xi", eps), _generator(args, "eta", eps)
    p = parse_point(args.point)
    t1, t2, d = parse_grid(args.grid)
    try:
        traj = flows.flow_dim2(xi, eta, p, t1, t2, d, eps)
    except (flows.FlowError, ValueError) as err:
        raise UsageError(str(err)) from None
    _write_traj(traj, args.out, args.format)
    print(f"samples: {len(traj.times)}")
    _print_drift(flows.drift_report(traj, eps))
    return 0


def cmd_orbit_classify(args, eps: EpsilonTable) -> int:
    xi = _generator(args, "xi", eps)
    p = parse_point(args.point)
    if args.eta is not None:
        res = flows.classify_pair(xi, parse_generator(args.eta, eps), p, args.tol)
    else:
        res = flows.orbit_closure_classify(xi, p, args.tol)
    print(f"class: {res.tag}")
    print(f"dependence: {res.dependence}")
    if res.frequencies:
        print("plane  frequency")
        for i, f in enumerate(res.frequencies):
            print(f"{i:<6} {f:.12g}")
    return 0


def cmd_hamiltonian(args, eps: EpsilonTable) -> int:
    xi = _generator(args, "xi", eps)
    p = parse_point(args.point)
    if args.eta is None:
        vals = hamiltonian_dim1_on_frame(xi, p, eps)
        for i, v in enumerate(vals, 1):
            print(f"H(b{i}) = {_fmt(v)}")
        return 0
    eta = parse_generator(args.eta, eps)
    try:
        val = hamiltonian_dim2_at(xi, eta, p, eps)
    except NonCommutingError as err:
        norm = float(np.linalg.norm(np.array(err.bracket, dtype=float)))
        print(f"error: generators do not commute, |[xi, eta]| = {norm:.6g}", file=sys.stderr)
        return 2
    print(f"H = {_fmt(val)}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sixsphere", description=__doc__.splitlines()[0])
    parser.add_argument("--corrupt-epsilon", action="store_true", help=argparse.SUPPRESS)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify-all", help="run every check and report PASS/FAIL")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=20)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_verify_all)

    g = sub.add_parser("g2", help="g2 utilities")
    gsub = g.add_subparsers(dest="g2_command", required=True)
    b = gsub.add_parser("basis", help="export the exact g2 basis as JSON")
    b.add_argument("--out", required=True)
    b.set_defaults(func=cmd_g2_basis)

    gen_help = "basis index 0..13, t1, t2, c1, c2 or torus:a,b"

    p = sub.add_parser("flow", help="sample t -> exp(t xi) p")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--xi", help=gen_help)
    src.add_argument("--xi-file", help="JSON file holding a 7x7 matrix")
    p.add_argument("--point", required=True)
    p.add_argument("--t0", type=float, default=0.0)
    p.add_argument("--t1", type=float, default=10.0)
    p.add_argument("--dt", type=float, default=0.1)
    p.add_argument("--out")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_flow)

    p = sub.add_parser("flow2", help="sample (t1, t2) -> exp(t2 eta) exp(t1 xi) p")
    p.add_argument("--xi", required=True, help=gen_help)
    p.add_argument("--eta", required=True, help=gen_help)
    p.add_argument("--point", required=True)
    p.add_argument("--grid", required=True, help="T1xT2xD")
    p.add_argument("--out")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_flow2)

    p = sub.add_parser("orbit-classify", help="closure type of an orbit")
    p.add_argument("--xi", required=True, help=gen_help)
    p.add_argument("--eta", help="second commuting generator (two-parameter orbit)")
    p.add_argument("--point", required=True)
    p.add_argument("--tol", type=float, default=1e-6)
    p.set_defaults(func=cmd_orbit_classify)

    p = sub.add_parser("hamiltonian", help="evaluate a HDW Hamiltonian at a point")
    p.add_argument("--xi", required=True, help=gen_help)
    p.add_argument("--eta", help=gen_help)
    p.add_argument("--point", required=True)
    p.set_defaults(func=cmd_hamiltonian)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    eps = corrupted_epsilon() if args.corrupt_epsilon else EPSILON
    try:
        return args.func(args, eps)
    except UsageError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except ValueError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
