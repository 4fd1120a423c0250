"""Command-line entry point: ``tfsr <subcommand> ...``.

Exit codes: 0 success, 1 a verification failed, 2 bad input, 3 the input is
outside the domain of the requested computation.
"""
from __future__ import annotations

import argparse
import os
import sys
from fractions import Fraction
from pathlib import Path

from . import bounds
from .exactmath import format_fraction, parse_fraction
from .graphcore import (
    CompleteGraph,
    Graph6Error,
    a_value,
    boundedness_check,
    catalog,
    is_diameter_two,
    is_triangle_free,
    is_twin_free,
    minimizing_pairs,
    read_graph,
    regular_density,
    write_graph,
)
from .graphcore.catalog import ParameterOutOfRange

OK, FAILED, BAD_INPUT, DOMAIN = 0, 1, 2, 3

_PIECE_NAMES = {"krein": "Krein", "hat_krein": "HatKrein", "improved": "Improved"}
_ALGEBRAIC = {"krein", "hat_krein", "improved"}


class CliError(Exception):
    def __init__(self, code: int, msg: str):
        super().__init__(msg)
        self.code = code


def _fraction(text: str) -> Fraction:
    try:
        return parse_fraction(text)
    except (ValueError, ZeroDivisionError):
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError):
            raise CliError(BAD_INPUT, f"not a rational number: {text!r}")


def _q(x: Fraction) -> str:
    """Lowest-terms p/q; integers print bare."""
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else format_fraction(x)


def _workers(arg: int | None) -> int:
    if arg is not None:
        return arg
    return int(os.environ.get("TFSR_WORKERS", "1"))


def _emit(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _yn(b: bool) -> str:
    return "yes" if b else "no"


def _load(args):
    """The graph named by --catalog or read from --graph/--weights."""
    if getattr(args, "catalog", None):
        try:
            return catalog(args.catalog)
        except ParameterOutOfRange as exc:
            raise CliError(BAD_INPUT, str(exc))
    if not args.graph:
        raise CliError(BAD_INPUT, "need --graph FILE or --catalog NAME")
    try:
        return read_graph(args.graph, getattr(args, "weights", None))
    except (OSError, Graph6Error, ValueError) as exc:
        raise CliError(BAD_INPUT, f"cannot read graph: {exc}")


# ---------------------------------------------------------------- subcommands


def cmd_eval_bound(args) -> int:
    rho = _fraction(args.rho)
    precision = _fraction(args.precision)
    if precision <= 0:
        raise CliError(BAD_INPUT, "precision must be positive")
    if not 0 <= rho <= Fraction(1, 2):
        raise CliError(BAD_INPUT, f"rho = {_q(rho)} outside [0, 1/2]")
    if rho == Fraction(1, 2):
        raise CliError(DOMAIN, "no bound at rho = 1/2 (only complete bipartite graphs)")
    if rho <= Fraction(1, 3):
        bv = bounds.a0(rho, precision)
        parts = bv.piece.split("|")
        piece = "|".join(_PIECE_NAMES.get(p, p) for p in parts)
        if bv.is_exact:
            value = _q(bv.exact())
            if not isinstance(bv.value, Fraction) or any(p in _ALGEBRAIC for p in parts):
                value += " (exact)"
        else:
            value = str(bv.refine(precision))
    else:
        value_q = bounds.large_rho_bound(rho)
        if rho > Fraction(2, 5):
            piece = "zero"
        elif rho > Fraction(3, 8):
            piece = "3rho-1"
        else:
            piece = "rho/3"
        value = _q(value_q)
    print(f"piece={piece} value={value}")
    return OK


def cmd_curve(args) -> int:
    step = _fraction(args.grid_step)
    precision = _fraction(args.precision)
    if step <= 0 or precision <= 0:
        raise CliError(BAD_INPUT, "grid step and precision must be positive")
    pts = bounds.grid(step)
    rows = bounds.curve_samples(pts, precision, _workers(args.workers))
    _emit(bounds.curve_csv(rows, precision), args.out)
    return OK


def cmd_analyze(args) -> int:
    G = _load(args)
    tf = is_triangle_free(G)
    fields = [f"n={G.n}", f"triangle-free={_yn(tf)}"]
    if not tf:
        print(" ".join(fields))
        raise CliError(DOMAIN, "graph contains a triangle")
    rho = regular_density(G)
    fields.append(f"rho={_q(rho) if rho is not None else 'irregular'}")
    try:
        a = a_value(G)
    except CompleteGraph:
        a = None
    fields.append(f"a={_q(a) if a is not None else 'undefined'}")
    fields.append(f"twin-free={_yn(is_twin_free(G))}")
    fields.append(f"diameter2={_yn(is_diameter_two(G))}")
    fields.append(f"boundedness={'n/a' if not a else ('pass' if boundedness_check(G, a) else 'fail')}")
    status = OK
    if rho is None or a is None or rho >= Fraction(1, 2):
        tight = "n/a"
    else:
        ref = bounds.a0(rho) if rho <= Fraction(1, 3) else bounds.BoundValue(bounds.large_rho_bound(rho), "large")
        c = ref.compare(a)  # sign of bound - a
        if c == 0:
            tight = "yes"
        elif c > 0:
            tight = "no"
        else:
            tight = "VIOLATED"
            status = FAILED
    fields.append(f"tight-vs-a0={tight}")
    print(" ".join(fields))
    return status


def cmd_optimize_weights(args) -> int:
    from .regweights import OPTIMAL, optimize_a, verify_certificate

    G = _load(args)
    if not is_triangle_free(G):
        raise CliError(DOMAIN, "graph contains a triangle")
    try:
        res = optimize_a(G)
    except CompleteGraph as exc:
        raise CliError(DOMAIN, str(exc))
    print(res.text())
    if res.status != OPTIMAL:
        return DOMAIN
    if not verify_certificate(G, res):
        print("certificate=invalid")
        return FAILED
    print("certificate=valid")
    return OK


def cmd_verify(args) -> int:
    from .flagcalc import case_analysis, identity_suite

    G = _load(args)
    if not is_triangle_free(G):
        raise CliError(DOMAIN, "graph contains a triangle")
    failed = 0
    if args.suite in ("identities", "all"):
        rep = identity_suite(G)
        print("# identities")
        print(rep.text())
        failed += sum(c.holds is False for c in rep.checks)
    if args.suite in ("cases", "all"):
        if regular_density(G) is None:
            raise CliError(DOMAIN, "case analysis needs a regular weighting")
        pairs = minimizing_pairs(G)
        if args.max_pairs is not None:
            pairs = pairs[: args.max_pairs]
        for v1, v2 in pairs:
            rep = case_analysis(G, v1, v2)
            print(f"# cases v1={v1} v2={v2}")
            print(rep.text())
            failed += sum(c.applicable and c.holds is False for c in rep.checks)
    print(f"verify: {'ok' if not failed else f'{failed} failing checks'}")
    return FAILED if failed else OK


def cmd_search(args) -> int:
    from .search import CheckpointCorrupt, SearchConfig, run_search, write_results

    try:
        cfg = SearchConfig.from_file(args.config)
    except (OSError, ValueError) as exc:
        raise CliError(BAD_INPUT, f"bad config: {exc}")
    if args.workers is not None:
        cfg.workers = args.workers
    try:
        results = run_search(cfg)
    except CheckpointCorrupt as exc:
        raise CliError(BAD_INPUT, str(exc))
    out = args.out or cfg.results or "-"
    write_results(results, out)
    return OK


def cmd_catalog(args) -> int:
    from .graphcore import to_graph6
    from .graphcore.graph6 import format_weights

    try:
        G = catalog(args.name)
    except ParameterOutOfRange as exc:
        raise CliError(BAD_INPUT, str(exc))
    if args.out == "-":
        sys.stdout.write(to_graph6(G) + "\n" + format_weights(G.weights))
    else:
        write_graph(G, args.out, args.weights_out or args.out + ".weights")
    return OK


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tfsr", description="Bounds and search tools for triangle-free regular graphs.")
    sub = p.add_subparsers(dest="command", required=True)
    default_precision = "1/" + str(10**12)

    s = sub.add_parser("eval-bound", help="evaluate the upper bound on a at a density")
    s.add_argument("--rho", required=True)
    s.add_argument("--precision", default=default_precision)
    s.set_defaults(func=cmd_eval_bound)

    s = sub.add_parser("curve", help="CSV of the bound over a grid of densities")
    s.add_argument("--grid-step", default="1/1000")
    s.add_argument("--precision", default=default_precision)
    s.add_argument("--out", default="-")
    s.add_argument("--workers", type=int)
    s.set_defaults(func=cmd_curve)

    def graph_args(s, with_catalog=False):
        s.add_argument("--graph")
        s.add_argument("--weights")
        if with_catalog:
            s.add_argument("--catalog")

    s = sub.add_parser("analyze", help="invariants of a weighted graph")
    graph_args(s, True)
    s.set_defaults(func=cmd_analyze)

    s = sub.add_parser("optimize-weights", help="exact LP for the best regular weighting")
    graph_args(s, True)
    s.set_defaults(func=cmd_optimize_weights)

    s = sub.add_parser("verify", help="run the flag identity and case-analysis checks")
    graph_args(s, True)
    s.add_argument("--suite", choices=("identities", "cases", "all"), default="all")
    s.add_argument("--max-pairs", type=int, help="only the first N minimizing pairs")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("search", help="isomorph-free search for regular skeletons")
    s.add_argument("--config", required=True)
    s.add_argument("--out")
    s.add_argument("--workers", type=int)
    s.set_defaults(func=cmd_search)

    s = sub.add_parser("catalog", help="write a named graph as graph6 plus a weight file")
    s.add_argument("--name", required=True)
    s.add_argument("--out", default="-")
    s.add_argument("--weights-out")
    s.set_defaults(func=cmd_catalog)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return BAD_INPUT if exc.code else OK
    try:
        return args.func(args)
    except CliError as exc:
        print(f"tfsr: {exc}", file=sys.stderr)
        return exc.code
    except bounds.RhoOutOfRange as exc:
        print(f"tfsr: {exc}", file=sys.stderr)
        return BAD_INPUT


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
