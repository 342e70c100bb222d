"""Command-line interface.

Usage:
    gsteffensen solve --problem P1 --method gsteffensen --g g1 --trace
    gsteffensen bench --format csv --out results.csv
    gsteffensen verify
    gsteffensen probe --kind order --problem P2 --g g1

Exit codes: 0 success, 1 verification mismatch, 2 usage error.
"""

from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence

from . import analysis, bench, gfunctions, problems
from .exceptions import RootFindingError
from .solver import METHOD_IDS, Method, SolverConfig, classify_outcome, iterate

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_USAGE = 2


def _csv_list(value: str, universe: Sequence[str]) -> list[str]:
    if value.strip().lower() == "all":
        return list(universe)
    return [v.strip() for v in value.split(",") if v.strip()]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gsteffensen", description="g-Steffensen root finding benchmark."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="solve one problem and print the iteration table")
    s.add_argument("--problem", required=True, help="P1..P9 or a formula alias")
    s.add_argument("--method", required=True, choices=METHOD_IDS)
    s.add_argument("--g", choices=gfunctions.g_ids(), help="g function (gsteffensen only)")
    s.add_argument("--x0", type=float)
    s.add_argument("--tol", type=float, default=SolverConfig.tol_residual, help="residual tolerance")
    s.add_argument("--max-iter", type=int, default=SolverConfig.max_iter)
    s.add_argument("--trace", action="store_true", help="print every iterate")

    b = sub.add_parser("bench", help="run the problem x method x g matrix")
    b.add_argument("--problems", default="all")
    b.add_argument("--gs", default="all")
    b.add_argument("--methods", default=",".join(METHOD_IDS))
    b.add_argument("--format", default="markdown", choices=sorted(bench.RENDERERS))
    b.add_argument("--out", help="write to this path instead of stdout")

    v = sub.add_parser("verify", help="run the full matrix and check it against the published results")
    v.add_argument("--format", default="text", choices=("text", "json"))

    p = sub.add_parser("probe", help="convergence diagnostics at the reference root")
    p.add_argument("--kind", required=True, choices=("rho", "phi", "order"))
    p.add_argument("--problem", required=True)
    p.add_argument("--g", required=True, choices=gfunctions.g_ids())
    p.add_argument("--h", type=float, help="offset for rho/phi probes")
    return parser


def _cmd_solve(args) -> int:
    prob = problems.get(args.problem)
    if args.method == "gsteffensen":
        if args.g is None:
            raise bench.UsageError("--g is required with --method gsteffensen")
        method = Method.gsteffensen(args.g)
    elif args.g is not None:
        raise bench.UsageError("--g only applies to --method gsteffensen")
    else:
        method = Method.newton() if args.method == "newton" else Method.steffensen()

    cfg = SolverConfig(tol_residual=args.tol, max_iter=args.max_iter)
    trace = iterate(method, prob, cfg, x0=args.x0)
    if args.trace:
        print(f"{'n':>4}  {'x_n':<24}  |f(x_n)|")
        for it in trace.iterates:
            print(f"{it.n:>4}  {it.x!r:<24}  {abs(it.fx)!r}")
    outcome = classify_outcome(trace, prob.interval)
    print(
        f"{prob.id} {method.id}{'/' + method.g_id if method.g_id else ''}: "
        f"n = {trace.steps}, x_n = {trace.final_x!r}, |f(x_n)| = {trace.residual!r}, "
        f"termination = {trace.termination.value}, outcome = {outcome.value}, evals = {trace.evals}"
    )
    return EXIT_OK


def _cmd_bench(args) -> int:
    report = bench.run_matrix(
        _csv_list(args.problems, problems.problem_ids()),
        _csv_list(args.gs, gfunctions.g_ids()),
        _csv_list(args.methods, METHOD_IDS),
    )
    text = bench.render(report, args.format)
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _cmd_verify(args) -> int:
    report = bench.run_matrix(methods=METHOD_IDS)
    result = bench.verify(report)
    sys.stdout.write(bench.render_verification(result, args.format))
    return result.exit_code


def _cmd_probe(args) -> int:
    prob = problems.get(args.problem)
    g = gfunctions.get(args.g)
    root = prob.primary_root
    if args.kind == "rho":
        hs = [args.h] if args.h is not None else [1e-2, 1e-3, 1e-4]
        print(f"{prob.id} {g.id}: |rho(p + h) - f'(p)| at p = {root!r}")
        for h, dev in analysis.rho_limit_probe(prob, g, hs, root):
            print(f"  h = {h!r}: {'degenerate' if dev is None else repr(dev)}")
    elif args.kind == "phi":
        h = args.h if args.h is not None else 1e-5
        val = analysis.phi_derivative_probe(prob, g, h, root)
        print(f"{prob.id} {g.id}: phi'(p) ~ {val!r} (h = {h!r}, p = {root!r})")
    else:
        trace = iterate(Method.gsteffensen(g), prob)
        est = analysis.empirical_order(trace, root)
        for n, q in est.per_triple:
            print(f"  n = {n}: {q!r}")
        pooled = "undefined" if est.pooled is None else repr(est.pooled)
        print(f"{prob.id} {g.id}: pooled order = {pooled} from {est.usable_count} triple(s)")
    return EXIT_OK


COMMANDS = {"solve": _cmd_solve, "bench": _cmd_bench, "verify": _cmd_verify, "probe": _cmd_probe}


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (bench.UsageError, KeyError, ValueError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"gsteffensen {args.command}: error: {msg}", file=sys.stderr)
        return EXIT_USAGE
    except RootFindingError as exc:
        print(f"gsteffensen {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_MISMATCH


if __name__ == "__main__":
    sys.exit(main())
