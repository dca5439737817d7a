"""Command line front end: ``hamint analyze | sweep | frobenius``.

Exit status is 0 for any completed analysis (Inconclusive included), 2 for
malformed input and 3 for structural refusals such as repeated roots.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .algebra import RationalFunction, UniPoly, format_scalar
from .ode import (
    DegenerateIndicial,
    IrregularSingularity,
    LinearODE2,
    RepeatedRoots,
    frobenius_solve,
    indicial_at_infinity,
    singular_points,
)
from .report import (
    TEST_ORDER,
    AnalysisRequest,
    UsageError,
    coefficient_list,
    parse_fraction,
    parse_h,
    parse_values,
    run_analysis,
    run_sweep,
)
from .variational import PARAM_NAMES

EXIT_USAGE = 2
EXIT_STRUCTURAL = 3


def _tests(text: str) -> tuple[str, ...]:
    items = tuple(t.strip() for t in text.split(",") if t.strip())
    bad = set(items) - set(TEST_ORDER) - {"all"}
    if bad or not items:
        raise UsageError(f"--tests takes a subset of {', '.join(TEST_ORDER + ('all',))}")
    return items


def _common(p: argparse.ArgumentParser, default_tests: str):
    p.add_argument("--h", default="symbolic", help='energy constant as "num/den", or "symbolic"')
    p.add_argument("--tests", default=default_tests, help="comma separated: " + ",".join(TEST_ORDER + ("all",)))
    p.add_argument("--order", type=int, default=12, help="series terms beyond each leading exponent")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--chart", choices=("auto", "x", "t"), default="auto")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hamint", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    an = sub.add_parser("analyze", help="run the obstruction tests at one parameter point")
    for n in PARAM_NAMES:
        an.add_argument(f"-{n}", f"--{n}", default="0", metavar="num/den")
    _common(an, "all")
    an.add_argument("--timing", action="store_true", help="add wall-clock time to the report")

    sw = sub.add_parser("sweep", help="evaluate a grid of parameter points")
    for n in PARAM_NAMES:
        sw.add_argument(f"-{n}", f"--{n}", default="0", metavar="LIST",
                        help='values "a,b,c" or inclusive range "start:stop:step"')
    sw.add_argument("--p", default=None, metavar="LIST",
                    help="resonance values; sets F = E(p^2 - 1)/4 at each point")
    _common(sw, "theorem")

    fr = sub.add_parser("frobenius", help="local analysis of y'' + c1 y' + c2 y = 0 at var = 0")
    fr.add_argument("--c1-num", default="0")
    fr.add_argument("--c1-den", default="1")
    fr.add_argument("--c2-num", default="0")
    fr.add_argument("--c2-den", default="1")
    fr.add_argument("--var", default="x")
    fr.add_argument("--order", type=int, default=12)
    fr.add_argument("--format", choices=("text", "json"), default="text")
    return parser


def _emit(text: str, out) -> None:
    out.write(text)
    if not text.endswith("\n"):
        out.write("\n")


def cmd_analyze(args, out) -> int:
    params = {n: parse_fraction(getattr(args, n)) for n in PARAM_NAMES}
    req = AnalysisRequest(params, h=parse_h(args.h), tests=_tests(args.tests), order=args.order,
                          output=args.format, chart=args.chart, timing=args.timing)
    rep = run_analysis(req)
    _emit(rep.to_json() if args.format == "json" else rep.to_text(), out)
    return rep.exit_code


def cmd_sweep(args, out) -> int:
    grid = {n: parse_values(getattr(args, n)) for n in PARAM_NAMES}
    p_values = parse_values(args.p) if args.p is not None else None
    if args.order < 4:
        raise UsageError("order must be at least 4")
    res = run_sweep(grid, p_values, h=parse_h(args.h), tests=_tests(args.tests),
                    order=args.order, chart=args.chart)
    _emit(res.to_json() if args.format == "json" else res.to_text(), out)
    return max((r.exit_code for r in res.reports), default=0)


def _rf(num: str, den: str, var: str) -> RationalFunction:
    d = UniPoly(coefficient_list(den), var)
    if d.is_zero():
        raise UsageError("zero denominator")
    return RationalFunction(UniPoly(coefficient_list(num), var), d)


def _exact(r) -> str:
    return str(r) if isinstance(r, Fraction) else format_scalar(r)


def frobenius_document(ode: LinearODE2, order: int) -> dict:
    doc: dict = {"schema": "hamint.frobenius/1", "equation": {"var": ode.var, "c1": repr(ode.c1),
                                                              "c2": repr(ode.c2)}}
    doc["singular_points"] = [loc.label() for loc in singular_points(ode)]
    try:
        inf = indicial_at_infinity(ode)
        doc["infinity_exponents"] = None if inf.roots is None else [_exact(r) for r in inf.roots]
    except IrregularSingularity:
        doc["infinity_exponents"] = "irregular"
    sols = frobenius_solve(ode, order)
    doc["solutions"] = [
        {"exponent": str(s.exponent), "series": repr(s.body.s0),
         "log_part": repr(s.body.s1) if s.has_log else None,
         "log_obstruction": format_scalar(s.log_obstruction)}
        for s in sols
    ]
    return doc


def cmd_frobenius(args, out) -> int:
    if args.order < 1:
        raise UsageError("order must be positive")
    ode = LinearODE2(_rf(args.c1_num, args.c1_den, args.var), _rf(args.c2_num, args.c2_den, args.var),
                     args.var)
    doc = frobenius_document(ode, args.order)
    if args.format == "json":
        _emit(json.dumps(doc, sort_keys=True, indent=2), out)
    else:
        lines = [f"y'' + ({doc['equation']['c1']}) y' + ({doc['equation']['c2']}) y = 0",
                 "singular points: " + "; ".join(doc["singular_points"]),
                 f"exponents at infinity: {doc['infinity_exponents']}"]
        for i, s in enumerate(doc["solutions"], 1):
            lines.append(f"solution {i}: exponent {s['exponent']}")
            lines.append(f"    {s['series']}")
            if s["log_part"]:
                lines.append(f"    + log({args.var}) * ({s['log_part']})")
            lines.append(f"    log obstruction: {s['log_obstruction']}")
        _emit("\n".join(lines), out)
    return 0


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.command == "analyze":
            return cmd_analyze(args, out)
        if args.command == "sweep":
            return cmd_sweep(args, out)
        return cmd_frobenius(args, out)
    except UsageError as exc:
        print(f"hamint: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except RepeatedRoots as exc:
        print(f"hamint: repeated roots: {exc}", file=sys.stderr)
        return EXIT_STRUCTURAL
    except (DegenerateIndicial, IrregularSingularity) as exc:
        print(f"hamint: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_STRUCTURAL


if __name__ == "__main__":
    sys.exit(main())
