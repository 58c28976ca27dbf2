"""Command-line front end: generate, solve, verify, benchmark, render.

Exit codes: 0 success (solve: optimal; verify: consistent), 1 verify
failure, 2 solve found the instance infeasible, 64 bad input (schema,
flags, inadmissible instance), 65 guard violations (oracle size guard,
generator budget).
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import List, Optional

from . import __version__
from .bench import run_bench, write_csv, write_plot
from .instance import (Instance, InstanceError, SchemaError, atomic_write,
                       dump_instance, load_instance, normalize)
from .oracle import GenBudgetExhausted, GenParams, GuardExceeded, gen_instance, verify_cover
from .reduce import SolveOptions, solve
from .render import write_svg

EXIT_OK = 0
EXIT_VERIFY_FAIL = 1
EXIT_INFEASIBLE = 2
EXIT_BAD_INPUT = 64
EXIT_GUARD = 65


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_BAD_INPUT)


def _build_parser() -> _Parser:
    p = _Parser(prog="diskcover",
                description="Exact line-separable disk / half-plane coverage solver")
    p.add_argument("--version", action="version", version=f"diskcover {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a random instance", parents=[])
    g.add_argument("--variant", required=True,
                   choices=["unit-disk", "line-constrained", "lower-halfplane"])
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--m", type=int, required=True)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--span", type=float, default=20.0)
    g.add_argument("--radius", type=float, default=2.0)
    g.add_argument("--rmin", type=float, default=0.5)
    g.add_argument("--rmax", type=float, default=4.0)
    g.add_argument("--line-y", type=float, default=0.0)
    g.add_argument("--infeasible-ok", action="store_true",
                   help="sample points anywhere instead of inside the union")
    g.add_argument("--out", required=True)

    s = sub.add_parser("solve", help="solve an instance file")
    s.add_argument("--in", dest="infile", required=True)
    s.add_argument("--out", required=True)
    s.add_argument("--algo", default="auto",
                   choices=["auto", "general", "unit", "halfplane", "oracle"])
    s.add_argument("--sigma", default="binary", choices=["binary", "cascade"])
    s.add_argument("--prune", default=None, choices=["fvd", "cap", "dual", "naive"])

    v = sub.add_parser("verify", help="check a solution file against its instance")
    v.add_argument("--in", dest="infile", required=True)
    v.add_argument("--solution", required=True)

    b = sub.add_parser("bench", help="time the pipeline over a size ladder")
    b.add_argument("--variant", default="unit-disk",
                   choices=["unit-disk", "line-constrained", "lower-halfplane"])
    b.add_argument("--sizes", required=True,
                   help="comma-separated n values (m = n), e.g. 16384,32768")
    b.add_argument("--reps", type=int, default=5)
    b.add_argument("--seed", type=int, default=1)
    b.add_argument("--sigma", default="cascade", choices=["binary", "cascade"])
    b.add_argument("--prune", default=None, choices=["fvd", "cap", "dual", "naive"])
    b.add_argument("--radius", type=float, default=2.0)
    b.add_argument("--span", type=float, default=None)
    b.add_argument("--out", required=True)
    b.add_argument("--plot", default=None, help="figure path (default: CSV stem + .png)")
    b.add_argument("--no-plot", action="store_true")

    r = sub.add_parser("render", help="draw an instance (and solution) as SVG")
    r.add_argument("--in", dest="infile", required=True)
    r.add_argument("--solution", default=None)
    r.add_argument("--svg", required=True)
    return p


def _cmd_gen(args) -> int:
    gp = GenParams(args.variant, args.n, args.m, seed=args.seed, span=args.span,
                   radius=args.radius, radius_range=(args.rmin, args.rmax),
                   feasible_only=not args.infeasible_ok, line_y=args.line_y)
    inst = gen_instance(gp)
    dump_instance(inst, args.out)
    print(f"wrote {args.out}: {inst.variant}, n={inst.n}, m={inst.m}, seed={args.seed}")
    return EXIT_OK


def _cmd_solve(args) -> int:
    inst = load_instance(args.infile)
    options = SolveOptions(algo=args.algo, sigma_backend=args.sigma,
                           prune_mode=args.prune)
    sol = solve(inst, options)
    atomic_write(args.out, json.dumps(sol.to_payload()) + "\n")
    print(f"{sol.status}: size={sol.size}"
          + (f", witness={sol.witness}" if sol.witness is not None else ""))
    return EXIT_OK if sol.status == "optimal" else EXIT_INFEASIBLE


def _load_solution(path) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            payload = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise SchemaError(f"cannot read solution file: {exc}") from exc
    if not isinstance(payload, dict) or "status" not in payload:
        raise SchemaError("solution file must be an object with a 'status' field")
    return payload


def _cmd_verify(args) -> int:
    inst = load_instance(args.infile)
    payload = _load_solution(args.solution)
    status = payload.get("status")
    if status == "optimal":
        disks = payload.get("disks", [])
        if (not isinstance(disks, list)
                or any(not isinstance(j, int) or isinstance(j, bool) for j in disks)):
            raise SchemaError("'disks' must be a list of integer region ids")
        if payload.get("size") != len(disks):
            print("verify: FAIL (size does not match id list)")
            return EXIT_VERIFY_FAIL
        if verify_cover(inst, disks):
            print(f"verify: OK (covers all {inst.n} points with {len(disks)} regions)")
            return EXIT_OK
        print("verify: FAIL (uncovered point)")
        return EXIT_VERIFY_FAIL
    if status == "infeasible":
        witness = payload.get("witness")
        if not isinstance(witness, int) or not (0 <= witness < inst.n):
            print("verify: FAIL (missing or invalid witness)")
            return EXIT_VERIFY_FAIL
        ni = normalize(inst)
        covered = verify_cover(
            Instance(ni.variant, 0.0, ni.points[witness:witness + 1],
                     disks=ni.disks, halfplanes=ni.halfplanes),
            list(range(ni.m)))
        if not covered:
            print(f"verify: OK (point {witness} is indeed uncovered)")
            return EXIT_OK
        print("verify: FAIL (claimed witness is covered)")
        return EXIT_VERIFY_FAIL
    print(f"verify: FAIL (unknown status {status!r})")
    return EXIT_VERIFY_FAIL


def _cmd_bench(args) -> int:
    try:
        sizes = [(int(tok), int(tok)) for tok in args.sizes.split(",") if tok]
    except ValueError:
        raise SchemaError(f"bad --sizes value: {args.sizes!r}") from None
    if not sizes:
        raise SchemaError("--sizes must name at least one size")
    records = run_bench(args.variant, sizes, reps=args.reps, seed=args.seed,
                        sigma_backend=args.sigma, prune_mode=args.prune,
                        radius=args.radius, span=args.span)
    write_csv(records, args.out)
    print(f"wrote {args.out} ({len(records)} rows)")
    if not args.no_plot:
        plot = args.plot or (args.out.rsplit(".", 1)[0] + ".png")
        write_plot(records, plot)
        print(f"wrote {plot}")
    return EXIT_OK


def _cmd_render(args) -> int:
    inst = load_instance(args.infile)
    chosen = None
    if args.solution:
        payload = _load_solution(args.solution)
        chosen = payload.get("disks", [])
        for j in chosen:
            if not isinstance(j, int) or not (0 <= j < inst.m):
                raise SchemaError(f"solution names unknown region id {j}")
    write_svg(inst, args.svg, chosen)
    print(f"wrote {args.svg}")
    return EXIT_OK


_COMMANDS = {"gen": _cmd_gen, "solve": _cmd_solve, "verify": _cmd_verify,
             "bench": _cmd_bench, "render": _cmd_render}


def main(argv: Optional[List[str]] = None) -> int:
    try:
        args = _build_parser().parse_args(argv)
    except SystemExit as exc:          # argparse exits for --help/--version/errors
        return int(exc.code or 0)
    try:
        return _COMMANDS[args.command](args)
    except (SchemaError, InstanceError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except (GuardExceeded, GenBudgetExhausted) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())
