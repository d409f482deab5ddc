"""zforge command line.

Exit codes: 0 success, 1 usage or malformed input, 2 construction or
verification failure (including an exhausted oracle budget).
"""

from __future__ import annotations

import argparse
import json
import secrets
import sys

from . import graphfile
from .construction import DEFAULT_RETRIES, VARIANTS, build, field_for_n, params_derive
from .errors import ConstructionFailed, EllTooSmall, TooSmall
from .gf import is_prime
from .graph import density_report, kst_free, kst_upper_bound
from .oracle import DEFAULT_NODE_BUDGET, OracleBudgetExceeded, z_exact
from .report import GridError, format_csv, parse_grid, run_grid

EXIT_OK, EXIT_USAGE, EXIT_FAIL = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _emit(obj) -> None:
    print(json.dumps(obj, sort_keys=False))


def cmd_construct(args) -> int:
    if not is_prime(args.q):
        raise UsageError(f"--q must be prime, got {args.q}")
    seed = args.seed
    if seed is None:
        seed = secrets.randbits(32)
        print(f"seed: {seed}", file=sys.stderr)
    try:
        params_derive(args.s, args.t, args.q, args.variant, d=args.d, ell=args.ell)
    except (ValueError, EllTooSmall) as exc:
        raise UsageError(str(exc)) from exc
    try:
        c = build(args.s, args.t, args.q, args.variant, seed, args.retries, d=args.d, ell=args.ell)
    except ConstructionFailed as exc:
        print(f"error: {exc}; accepted retries per index: {exc.retries_used}", file=sys.stderr)
        return EXIT_FAIL
    verdict = kst_free(c.graph, args.s, args.t)
    if not verdict.free:
        print(f"error: constructed graph contains K_{{{args.s},{args.t}}}", file=sys.stderr)
        return EXIT_FAIL
    graphfile.write(args.out, graphfile.GraphFile.from_construction(c))
    _emit({
        "out": args.out,
        "seed": seed,
        "m": c.graph.m,
        "n": c.graph.n,
        "edges": c.graph.edges,
        "d": c.params.d,
        "ell": c.params.ell,
        "retries_total": c.retries_total,
        "union_bound_ok": c.params.union_bound_ok,
    })
    return EXIT_OK


def cmd_verify(args) -> int:
    try:
        gf = graphfile.read(args.infile)
    except OSError as exc:
        raise UsageError(f"cannot read {args.infile}: {exc}") from exc
    except graphfile.GraphFileError as exc:
        raise UsageError(f"malformed graph file: {exc}") from exc
    if not gf.coherent():
        raise UsageError("polynomials do not reproduce the adjacency")
    verdict = kst_free(gf.graph, args.s, args.t)
    out: dict = {"free": verdict.free}
    if not verdict.free:
        out["witness"] = {"rows": list(verdict.rows), "cols": list(verdict.cols)}
    if args.report:
        out["report"] = density_report(gf.graph, args.s, args.t).as_dict()
    _emit(out)
    return EXIT_OK if verdict.free else EXIT_FAIL


def cmd_bound(args) -> int:
    try:
        upper = kst_upper_bound(args.m, args.n, args.s, args.t)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    _emit({"m": args.m, "n": args.n, "s": args.s, "t": args.t, "upper": upper})
    return EXIT_OK


def cmd_oracle(args) -> int:
    code = EXIT_OK
    try:
        res = z_exact(args.m, args.n, args.s, args.t, node_budget=args.budget)
    except OracleBudgetExceeded as exc:
        res, code = exc.result, EXIT_FAIL
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    _emit({
        "m": args.m,
        "n": args.n,
        "s": args.s,
        "t": args.t,
        "z": res.z,
        "exact": res.exact,
        "nodes": res.nodes_explored,
        "witness": [graphfile.encode_row(r, args.n) for r in res.witness.rows],
    })
    return code


def cmd_params(args) -> int:
    out: dict = {}
    try:
        q = args.q
        if q is None:
            q, _ = field_for_n(args.n, args.s)
            out["n_requested"] = args.n
        p = params_derive(args.s, args.t, q, args.variant)
    except (ValueError, TooSmall) as exc:
        raise UsageError(str(exc)) from exc
    out = {**p.as_dict(), **out}
    _emit(out)
    return EXIT_OK


def cmd_report(args) -> int:
    try:
        with open(args.grid, encoding="utf-8") as fh:
            entries = parse_grid(fh.read())
    except OSError as exc:
        raise UsageError(f"cannot read {args.grid}: {exc}") from exc
    except GridError as exc:
        raise UsageError(f"malformed grid: {exc}") from exc
    text = format_csv(run_grid(entries))
    with open(args.out, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="zforge", description="K_{s,t}-free constructions and Zarankiewicz bounds")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("construct", help="build a K_{s,t}-free graph by rejection sampling")
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--q", type=int, required=True, help="prime field order")
    p.add_argument("--variant", choices=VARIANTS, default="graph")
    p.add_argument("--d", type=int, default=None, help="degree cap override")
    p.add_argument("--ell", type=int, default=None, help="number of U-vertices override")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--retries", type=int, default=DEFAULT_RETRIES, help="attempts per index")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("verify", help="check K_{s,t}-freeness of a graph file")
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--report", action="store_true", help="include the density report")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bound", help="double-counting upper bound on z(m,n;s,t)")
    for flag in ("--m", "--n", "--s", "--t"):
        p.add_argument(flag, type=int, required=True)
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("oracle", help="exact z(m,n;s,t) by branch and bound")
    for flag in ("--m", "--n", "--s", "--t"):
        p.add_argument(flag, type=int, required=True)
    p.add_argument("--budget", type=int, default=DEFAULT_NODE_BUDGET, help="node budget")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("params", help="derive d and ell")
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--t", type=int, required=True)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--q", type=int)
    group.add_argument("--n", type=int, help="pick the largest prime q with q^s <= n")
    p.add_argument("--variant", choices=VARIANTS, default="graph")
    p.set_defaults(func=cmd_params)

    p = sub.add_parser("report", help="run a grid of constructions into a CSV")
    p.add_argument("--grid", required=True, help="CSV with columns s,t,q[,variant][,seed]")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_report)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"zforge {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
