"""Batch front end: construct, verify, solve, rank, peel, table, export-dimacs.

Exit codes: 0 success, 1 a violation or failed check, 2 usage error,
3 budget exhausted.  Identical arguments (and seed) produce byte-identical
output.  The environment variable XORKNESER_BUDGET overrides the default
search-node budget.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from math import comb
from pathlib import Path

from . import analysis, constructions, setsystem, solver

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3
SCHEMA = 1


def _default_budget() -> int:
    env = os.environ.get("XORKNESER_BUDGET")
    if env is None:
        return solver.DEFAULT_NODE_BUDGET
    try:
        value = int(env)
    except ValueError:
        raise ValueError(f"XORKNESER_BUDGET must be an integer, got {env!r}") from None
    if value < 1:
        raise ValueError("XORKNESER_BUDGET must be positive")
    return value


def _parse_range(text: str) -> list[int]:
    """'3' -> [3]; '2..8' -> [2, 3, .., 8]."""
    if ".." in text:
        lo, _, hi = text.partition("..")
        start, stop = int(lo), int(hi)
        if stop < start:
            raise ValueError(f"empty range {text!r}")
        return list(range(start, stop + 1))
    return [int(text)]


def _parse_ints(text: str) -> list[int]:
    return [int(p) for p in text.split(",") if p != ""]


def _read_family(path: str) -> setsystem.Family:
    text = Path(path).read_text()
    if text.lstrip().startswith("{"):
        return setsystem.from_json(text)
    return setsystem.decode(text)


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _family_payload(f: setsystem.Family) -> dict:
    return json.loads(setsystem.to_json(f))


def _write_family(f: setsystem.Family, args, summary: list[str]) -> None:
    body = setsystem.to_json(f) + "\n" if args.format == "json" else setsystem.encode(f)
    if args.output is None:
        sys.stdout.write(body)
        for line in summary:
            print(line, file=sys.stderr)
    else:
        Path(args.output).write_text(body)
        for line in summary:
            print(line)


def cmd_construct(args) -> int:
    if args.kind == "f2":
        fam = constructions.construct_f2_lower(args.n, args.k)
        guaranteed = args.n // args.k + comb(2 * args.k, args.k) * args.k // 2 - args.k
        summary = [
            f"size {len(fam)}",
            f"witnesses f_2({args.n},{args.k}) >= floor(n/k) + k*C(2k,k)/2 - k = {guaranteed}",
        ]
    elif args.kind == "core":
        if args.sizes is None and args.n is None:
            raise ValueError("construct core needs --n or --sizes")
        sizes = _parse_ints(args.sizes) if args.sizes else [args.n] * args.ell
        core = constructions.build_core(args.ell)
        fam = constructions.core_to_family(core, sizes)
        total = sum(sizes)
        summary = [
            f"size {len(fam)}",
            f"core universe {core.universe_size} <= {2 * args.ell + 1}",
            f"witnesses f_ell >= sum(n_i) - |U| = {total - core.universe_size}"
            f" (>= |V| - 2*ell - 1 = {total - 2 * args.ell - 1})",
        ]
    elif args.kind == "plane":
        fam = constructions.plane_family(args.q)
        ell, n = args.q + 1, args.q
        summary = [
            f"size {len(fam)}",
            f"witnesses f_{ell}({n},1) >= (ell-1)^2 = {args.q ** 2},"
            f" matching the ceiling ell*n - ell + 1 = {ell * n - ell + 1}",
        ]
    elif args.kind == "matrix":
        fam = constructions.matrix_family(args.n, args.k, args.t)
        m = args.n // args.k
        summary = [
            f"size {len(fam)}",
            f"witnesses f_{2 ** args.t - 1}({args.n},{args.k}) >= floor(n/k)^t = {m ** args.t}",
        ]
    else:  # extend
        fam = constructions.extend_power(_read_family(args.input), _parse_ints(args.indices))
        summary = [
            f"size {len(fam)}",
            f"extended to {fam.layout.ell} blocks, size and validity preserved",
        ]
    _write_family(fam, args, summary)
    return EXIT_OK


def cmd_verify(args) -> int:
    fam = _read_family(args.input)
    report = setsystem.verify_family(fam)
    if args.format == "json":
        payload: dict = {"schema": SCHEMA, "command": "verify", "valid": report.valid}
        if report.violation is not None:
            v = report.violation
            payload["violation"] = {
                "kind": v.kind,
                "members": list(v.members),
                "disjoint_blocks": v.disjoint_blocks,
            }
        print(json.dumps(payload))
    else:
        if report.valid:
            print(f"valid: {len(fam)} members over {fam.layout.ell} blocks")
        else:
            v = report.violation
            if v.kind == "uniformity":
                print(f"invalid: member {v.members[0]} is not block-uniform")
            else:
                print(
                    f"invalid: members {v.members[0]} and {v.members[1]} are disjoint"
                    f" in {v.disjoint_blocks} blocks (even)"
                )
    return EXIT_OK if report.valid else EXIT_VIOLATION


def cmd_solve(args) -> int:
    budget = args.budget if args.budget is not None else _default_budget()
    result = solver.brute_force_f(
        args.n, args.k, args.ell, budget=budget, vertex_budget=args.vertex_budget, threads=args.threads
    )
    if args.format == "json":
        print(
            json.dumps(
                {
                    "schema": SCHEMA,
                    "command": "solve",
                    "n": args.n,
                    "k": args.k,
                    "ell": args.ell,
                    "size": result.size,
                    "status": result.status,
                    "nodes": result.nodes_explored,
                    "witness": list(result.witness),
                }
            )
        )
    else:
        mark = "=" if result.status == "exact" else ">="
        print(f"f_{args.ell}({args.n},{args.k}) {mark} {result.size} [{result.status}]")
        print(f"nodes {result.nodes_explored}")
        print("witness " + " ".join(str(v) for v in result.witness))
    return EXIT_OK if result.status == "exact" else EXIT_BUDGET


def cmd_rank(args) -> int:
    fam = _read_family(args.input)
    rank = solver.gf2_rank(solver.family_gf2_system(fam))
    ok = solver.check_rank_bound(fam)
    needed = len(fam) + fam.layout.ell - 1
    if args.format == "json":
        print(
            json.dumps(
                {
                    "schema": SCHEMA,
                    "command": "rank",
                    "members": len(fam),
                    "rank": rank,
                    "required": needed,
                    "holds": ok,
                }
            )
        )
    else:
        print(f"rank {rank} of {len(fam) + fam.layout.ell} vectors, required >= {needed}")
        print("rank law holds" if ok else "rank law FAILS")
    return EXIT_OK if ok else EXIT_VIOLATION


def cmd_peel(args) -> int:
    fam = _read_family(args.input)
    trace = analysis.peel(fam)
    matching_report = None
    if trace.q >= 2:
        matching_report = analysis.verify_matching(trace.matching(fam.layout.k))
    if args.format == "json":
        payload = {
            "schema": SCHEMA,
            "command": "peel",
            "rounds": trace.q,
            "degrees": [r.degree for r in trace.rounds],
            "pivots": [r.pivot for r in trace.rounds],
            "residual": len(trace.residual),
            "b_degree_exceeded": trace.b_degree_exceeded,
            "accounting_ok": trace.accounting_ok,
        }
        if matching_report is not None:
            payload["matching"] = {
                "valid": matching_report.valid,
                "weight": matching_report.weight,
                "bound": str(matching_report.bound),
                "within_bound": matching_report.within_bound,
            }
        print(json.dumps(payload))
    else:
        print(f"rounds {trace.q}, residual {len(trace.residual)} members")
        for i, r in enumerate(trace.rounds, start=1):
            print(
                f"round {i}: pivot {r.pivot} degree {r.degree}"
                f" extracted {len(r.extracted)} collateral {len(r.collateral)}"
            )
        print(f"accounting {'ok' if trace.accounting_ok else 'VIOLATED'}")
        if matching_report is not None:
            print(
                f"matching valid={matching_report.valid} weight={matching_report.weight}"
                f" bound={matching_report.bound} within={matching_report.within_bound}"
            )
    failed = not trace.accounting_ok or (
        matching_report is not None and not (matching_report.valid and matching_report.within_bound)
    )
    return EXIT_VIOLATION if failed else EXIT_OK


def cmd_table(args) -> int:
    budget = args.budget if args.budget is not None else _default_budget()
    rows = analysis.bound_rows(
        _parse_range(args.ell),
        _parse_range(args.n),
        _parse_range(args.k),
        node_budget=budget,
        vertex_budget=args.vertex_budget,
        threads=args.threads,
    )
    _emit(analysis.rows_to_csv(rows), args.output)
    return EXIT_OK


def cmd_export_dimacs(args) -> int:
    graph = solver.build_product_graph(
        args.n, args.k, args.ell, vertex_budget=args.vertex_budget, with_labels=False
    )
    _emit(solver.write_dimacs(graph), args.output)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="xorkneser",
        description="construct, verify, and measure semi-intersecting families",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_io(p, with_output=True):
        p.add_argument("--format", choices=["text", "json"], default="text")
        if with_output:
            p.add_argument("-o", "--output", default=None, help="output path (default stdout)")

    c = sub.add_parser("construct", help="build an explicit family")
    csub = c.add_subparsers(dest="kind", required=True)
    p = csub.add_parser("f2", help="two-block pair/lattice family")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    add_io(p)
    p.set_defaults(func=cmd_construct)
    p = csub.add_parser("core", help="k=1 family from an ell-core")
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--n", type=int, help="uniform block size")
    p.add_argument("--sizes", help="comma-separated per-block sizes")
    add_io(p)
    p.set_defaults(func=cmd_construct)
    p = csub.add_parser("plane", help="projective-plane family, ell = q + 1")
    p.add_argument("--q", type=int, required=True)
    add_io(p)
    p.set_defaults(func=cmd_construct)
    p = csub.add_parser("matrix", help="power construction, ell = 2^t - 1")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--t", type=int, required=True)
    add_io(p)
    p.set_defaults(func=cmd_construct)
    p = csub.add_parser("extend", help="append a block with a fixed k-set")
    p.add_argument("--input", required=True)
    p.add_argument("--indices", required=True, help="comma-separated offsets in the new block")
    add_io(p)
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("verify", help="check a family file")
    p.add_argument("input")
    add_io(p, with_output=False)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("solve", help="exact clique number of the product graph")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--budget", type=int, default=None, help="search-node budget")
    p.add_argument("--vertex-budget", type=int, default=solver.DEFAULT_VERTEX_BUDGET)
    p.add_argument("--threads", type=int, default=1)
    add_io(p, with_output=False)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("rank", help="GF(2) rank law for a k=1 family")
    p.add_argument("input")
    add_io(p, with_output=False)
    p.set_defaults(func=cmd_rank)

    p = sub.add_parser("peel", help="pivot-removal decomposition of a two-block family")
    p.add_argument("input")
    add_io(p, with_output=False)
    p.set_defaults(func=cmd_peel)

    p = sub.add_parser("table", help="bounds vs exact values over a parameter grid")
    p.add_argument("--ell", required=True, help="value or a..b range")
    p.add_argument("--n", required=True, help="value or a..b range")
    p.add_argument("--k", required=True, help="value or a..b range")
    p.add_argument("--budget", type=int, default=None)
    p.add_argument("--vertex-budget", type=int, default=solver.DEFAULT_VERTEX_BUDGET)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("export-dimacs", help="write the product graph in DIMACS format")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--vertex-budget", type=int, default=solver.DEFAULT_VERTEX_BUDGET)
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_export_dimacs)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except solver.VertexBudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except setsystem.FamilyParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
