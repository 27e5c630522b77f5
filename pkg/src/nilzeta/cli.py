"""Command-line frontend.

Exit status: 0 when every requested check passes, 1 when one fails,
2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import analytic, checks, counting, coxeter
from .algebra import parse_poly
from .integrals import oracle, zeta

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)


def _emit(results: list[checks.CheckResult], fmt: str) -> int:
    if fmt == "json":
        print(_dump([r.to_json_obj() for r in results]))
    else:
        for r in results:
            print(f"{r.status} {r.target}/{r.check}: expected {r.expected}; actual {r.actual}")
        failed = sum(not r.passed for r in results)
        print(f"{len(results) - failed}/{len(results)} checks passed")
    return EXIT_OK if all(r.passed for r in results) else EXIT_FAIL


def _config(args) -> dict:
    overrides = {}
    if args.config:
        try:
            with open(args.config) as fh:
                overrides = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {args.config}: {exc}") from exc
    if args.threads is not None:
        overrides["threads"] = args.threads
    if args.seed is not None:
        overrides["seed"] = args.seed
    try:
        return checks.merged_config(overrides)
    except KeyError as exc:
        raise UsageError(str(exc)) from exc


# subcommands


def cmd_zeta(args, cfg) -> int:
    z = zeta.local_zeta(args.case)
    if args.format == "json":
        print(_dump(z.to_json_obj()))
    elif args.format == "latex":
        print(z.format("latex"))
    else:
        print(z.format("text"))
    return EXIT_OK


def cmd_verify(args, cfg) -> int:
    if args.all:
        targets = list(checks.CHECKS)
    elif args.target:
        targets = args.target
    else:
        raise UsageError("verify needs --target or --all")
    unknown = [t for t in targets if t not in checks.CHECKS]
    if unknown:
        raise UsageError(f"unknown target(s) {unknown}; known: {', '.join(checks.CHECKS)}")
    if (args.m is None) != (args.n is None):
        raise UsageError("--m and --n go together")
    results = []
    for t in targets:
        if t == "lemma21" and args.m is not None:
            if not args.m >= args.n >= 1:
                raise UsageError("need m >= n >= 1")
            results += checks.check_lemma21(cfg, [(args.m, args.n)])
        else:
            results += checks.CHECKS[t](cfg)
    return _emit(results, args.format)


def cmd_oracle(args, cfg) -> int:
    if args.target not in oracle.TARGETS:
        raise UsageError(f"unknown oracle target {args.target!r}; known: {', '.join(oracle.TARGETS)}")
    spec = oracle.TARGETS[args.target]
    r = oracle.oracle_residue_enum(
        spec, args.q, args.level, {"tau": args.tau, "rho": args.rho},
        budget=cfg["oracle_budget"], workers=cfg["threads"],
    )
    value = oracle.target_value(args.target, args.q, args.tau, args.rho)
    ok = r.contains(value)
    if args.format == "json":
        print(_dump({
            "target": args.target, "q": args.q, "level": args.level, "tau": args.tau, "rho": args.rho,
            "lower": str(r.lower), "upper": str(r.upper), "closed_form": str(value),
            "cells": r.cells, "status": "PASS" if ok else "FAIL",
        }))
    else:
        print(f"{args.target} q={args.q} N={args.level}: [{float(r.lower):.12g}, {float(r.upper):.12g}]")
        print(f"closed form {float(value):.12g}: {'CONTAINED' if ok else 'OUTSIDE'}")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_count(args, cfg) -> int:
    counted = counting.COUNTERS[args.variety](args.q, workers=cfg["threads"])
    expected = counting.closed_form_value(args.variety, args.q)
    ok = counted == expected
    if args.format == "json":
        print(_dump({"variety": args.variety, "q": args.q, "count": counted, "closed_form": expected, "match": ok}))
    else:
        print(f"{counted}, closed-form {expected}, {'MATCH' if ok else 'MISMATCH'}")
    return EXIT_OK if ok else EXIT_FAIL


def _poly_out(p, fmt: str):
    return p.to_json_obj() if fmt == "json" else p.format("text")


def cmd_coxeter(args, cfg) -> int:
    if args.identity:
        ok = coxeter.check_cox_identity(args.identity)
        print(_dump({"identity": args.identity, "holds": ok}) if args.format == "json" else f"{args.identity}: {'PASS' if ok else 'FAIL'}")
        return EXIT_OK if ok else EXIT_FAIL
    if args.fpoly:
        n, *I = args.fpoly
        if any(not 0 <= i < n for i in I):
            raise UsageError(f"I must be a subset of 0..{n - 1}")
        p = coxeter.f_poly(n, I).poly
    elif args.n is not None and args.poincare:
        p = coxeter.poincare_polynomial(args.n)
    else:
        raise UsageError("coxeter needs --identity, --fpoly or --n with --poincare")
    out = _poly_out(p, args.format)
    print(_dump(out) if args.format == "json" else out)
    return EXIT_OK


def cmd_topo(args, cfg) -> int:
    t = analytic.topological_zeta(zeta.local_zeta(args.case))
    if args.format == "json":
        print(_dump({"case": args.case, "num": t.num.to_json_obj(), "den": t.den.to_json_obj(), "text": t.format("text")}))
    else:
        print(t.format("latex" if args.format == "latex" else "text"))
    return EXIT_OK


def _frac(x: Fraction | None) -> str | None:
    return None if x is None else str(x)


def cmd_abscissa(args, cfg) -> int:
    z = zeta.local_zeta(args.case)
    value = zeta.euler_abscissa(z)
    poles = zeta.pole_abscissas(z)
    if args.format == "json":
        print(_dump({"case": args.case, "abscissa": str(value), "poles": [str(p) for p in poles]}))
    else:
        print(value)
    return EXIT_OK


def cmd_beta(args, cfg) -> int:
    if args.poly:
        p = parse_poly(args.poly, zeta.QT)
    else:
        p = zeta.local_zeta(args.case).exceptional_part()
        if p.is_constant():
            raise UsageError(f"{args.case} has no exceptional numerator")
    value = zeta.beta_invariant(p)
    print(_dump({"poly": p.format("text"), "beta": str(value)}) if args.format == "json" else value)
    return EXIT_OK


def cmd_boundary(args, cfg) -> int:
    data = analytic.continuation_boundary(args.case)
    if args.format == "json":
        print(_dump({
            "case": args.case,
            "boundary": _frac(data.boundary),
            "poles": [str(p) for p in data.poles],
        }))
    else:
        where = "whole plane" if data.boundary is None else f"Re(s) > {data.boundary}"
        print(f"continuation: {where}; poles at Re(s) = {', '.join(map(str, data.poles))}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON file overriding budgets")
    common.add_argument("--threads", type=int, help="worker threads (default: $NILZETA_THREADS or 1)")
    common.add_argument("--seed", type=int, help="seed for random evaluation points")
    # "factored" is an alias of "text": both print the factored form
    common.add_argument("--format", choices=("text", "factored", "json", "latex"), default="text")

    parser = argparse.ArgumentParser(prog="nilzeta", description="Local representation zeta functions: compute and verify.")
    sub = parser.add_subparsers(dest="command", required=True)
    case_choices = ("m1n1", "m2n1")

    p = sub.add_parser("zeta", parents=[common], help="factored local zeta function")
    p.add_argument("--case", choices=case_choices, required=True)
    p.set_defaults(func=cmd_zeta)

    p = sub.add_parser("verify", parents=[common], help="run named checks")
    p.add_argument("--target", action="append", help=f"one of: {', '.join(checks.CHECKS)}")
    p.add_argument("--all", action="store_true")
    p.add_argument("--m", type=int)
    p.add_argument("--n", type=int)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("oracle", parents=[common], help="residue-enumeration bounds for an integral")
    p.add_argument("--target", required=True, help=", ".join(oracle.TARGETS))
    p.add_argument("--q", type=int, default=2)
    p.add_argument("--level", type=int, default=6)
    p.add_argument("--tau", type=int, default=1)
    p.add_argument("--rho", type=int, default=1)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("count", parents=[common], help="finite-field point counts")
    p.add_argument("--variety", choices=tuple(counting.COUNTERS), required=True)
    p.add_argument("--q", type=int, required=True)
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("coxeter", parents=[common], help="type-B Coxeter statistics")
    p.add_argument("--n", type=int)
    p.add_argument("--poincare", action="store_true")
    p.add_argument("--identity", choices=("cox1", "cox2"))
    p.add_argument("--fpoly", type=int, nargs="+", metavar="N_OR_I", help="n followed by the elements of I")
    p.set_defaults(func=cmd_coxeter)

    for name, func, helptext in (
        ("topo", cmd_topo, "topological zeta function"),
        ("abscissa", cmd_abscissa, "abscissa of convergence of the Euler product"),
        ("boundary", cmd_boundary, "meromorphic continuation boundary"),
    ):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("--case", choices=case_choices, required=True)
        p.set_defaults(func=func)

    p = sub.add_parser("beta", parents=[common], help="beta invariant of an Euler-factor numerator")
    p.add_argument("--case", choices=case_choices, default="m2n1")
    p.add_argument("--poly", help="polynomial in q, t with constant term 1")
    p.set_defaults(func=cmd_beta)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        cfg = _config(args)
        return args.func(args, cfg)
    except UsageError as exc:
        print(f"nilzeta: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, oracle.TractabilityError, counting.TractabilityError, coxeter.CoxeterError) as exc:
        print(f"nilzeta: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
