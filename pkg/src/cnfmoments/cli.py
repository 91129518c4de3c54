"""Command-line entry point: ``cnfmoments {bounds,count,dist,slim,gen,compare}``.

Exit codes: 0 success, 2 unreadable input, 3 enumeration cap exceeded,
4 internal invariant violation (a sound bound below the exact count).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from ._numeric import ceil_decimal, fraction_str
from .bounds import bound_report
from .cnf import DimacsError, emit_dimacs, read_formula
from .compare import directory_instances, run_compare, write_compare_csv
from .frustration import moments
from .generate import GenSpec, generate
from .oracle import OracleCapExceeded, default_cap, enumerate_distribution
from .slimsat import normalize

EXIT_PARSE, EXIT_CAP, EXIT_INVARIANT = 2, 3, 4
WARN_N = 24


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _load(path):
    try:
        return read_formula(path)
    except (OSError, DimacsError, ValueError) as exc:
        raise CliError(f"cannot read {path}: {exc}", EXIT_PARSE) from exc


def _oracle(f, cap):
    if f.n > WARN_N:
        print(f"warning: enumerating 2^{f.n} assignments", file=sys.stderr)
    try:
        return enumerate_distribution(f, cap=cap)
    except OracleCapExceeded as exc:
        raise CliError(str(exc), EXIT_CAP) from exc


def _show(v) -> str:
    if v is None:
        return "-"
    return fraction_str(v) if not isinstance(v, float) else repr(v)


def cmd_bounds(args) -> int:
    f = _load(args.file)
    for w in f.warnings:
        print(f"warning: {w}", file=sys.stderr)
    dist = _oracle(f, args.cap) if args.exact else None
    report = bound_report(f, dist, exact=not args.float, v1=args.v1, v_le=args.v_le)
    bad = [name for name, cap in report.max_solutions.items()
           if report.exact_count is not None and cap < report.exact_count]
    if args.json:
        out = report.to_json()
        out["moments"] = moments(f, exact=not args.float).to_json()
        out["raw_m"] = f.raw_m
        json.dump(out, sys.stdout, indent=2)
        print()
    else:
        mom = moments(f, exact=not args.float)
        print(f"n={f.n} m={f.m} (raw clauses {f.raw_m})")
        print(f"E(u)={_show(mom.mean)}  E(u^2)={_show(mom.second_moment)}  Var(u)={_show(mom.variance)}")
        print(f"{'bound':<22}{'value':>24}{'decimal (up)':>14}{'cap':>8}  kind")
        for e in report.entries:
            kind = "sound" if e.sound else "estimate"
            if e.conditional:
                kind += ", conditional"
            if e.target != "v0":
                kind += f", bounds {e.target}"
            if e.clamped:
                kind += ", clamped"
            if e.error:
                kind = f"n/a: {e.error}"
            dec = ceil_decimal(e.value) if e.value is not None else "-"
            cap = report.max_solutions.get(e.name, "")
            print(f"{e.name:<22}{_show(e.value):>24}{dec:>14}{cap!s:>8}  {kind}")
        print(f"verdict: {report.verdict}")
        if report.exact_count is not None:
            print(f"exact count: {report.exact_count}")
    if bad:
        print(f"invariant violation: caps below exact count for {bad}", file=sys.stderr)
        return EXIT_INVARIANT
    return 0


def cmd_count(args) -> int:
    dist = _oracle(_load(args.file), args.cap)
    print(dist.counts[0])
    return 0


def cmd_dist(args) -> int:
    dist = _oracle(_load(args.file), args.cap)
    print(json.dumps(dist.to_json()))
    return 0


def cmd_slim(args) -> int:
    res = normalize(_load(args.file))
    text = emit_dimacs(res.formula)
    log = dict(res.log, count_preserving=res.count_preserving)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    if args.log:
        Path(args.log).write_text(json.dumps(log, indent=2) + "\n")
    else:
        print(json.dumps(log), file=sys.stderr)
    return 0


def _width(text: str):
    if "-" in text:
        lo, hi = text.split("-", 1)
        return int(lo), int(hi)
    return int(text)


def cmd_gen(args) -> int:
    try:
        f = generate(GenSpec(args.vars, args.clauses, args.width, args.seed))
    except ValueError as exc:
        raise CliError(str(exc), EXIT_PARSE) from exc
    text = json.dumps(f.to_json()) + "\n" if args.json else emit_dimacs(
        f, comments=[f"gen n={args.vars} m={args.clauses} width={args.width} seed={args.seed}"])
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_compare(args) -> int:
    if args.directory:
        instances = directory_instances(args.directory)
    elif args.vars is not None and args.clauses is not None:
        instances = [
            (f"n{args.vars}_m{args.clauses}_w{args.width}_s{seed}",
             generate(GenSpec(args.vars, args.clauses, args.width, seed)))
            for seed in range(args.seed_start, args.seed_start + args.seeds)
        ]
    else:
        raise CliError("compare needs a directory or --vars/--clauses/--width", EXIT_PARSE)
    out = open(args.out, "w", newline="") if args.out else sys.stdout
    try:
        summary = write_compare_csv(run_compare(instances, workers=args.workers), out)
    finally:
        if args.out:
            out.close()
    return EXIT_INVARIANT if summary.violations else 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cnfmoments", description="Moment-based #SAT upper bounds for CNF formulas.")
    sub = p.add_subparsers(dest="command", required=True)

    def add_cap(sp):
        sp.add_argument("--cap", type=int, default=None,
                        help=f"max n for enumeration (default $FRUSTRATION_ORACLE_CAP or {default_cap()})")

    b = sub.add_parser("bounds", help="upper bounds on the number of solutions")
    b.add_argument("file")
    b.add_argument("--exact", action="store_true", help="enumerate u and add distribution-based bounds")
    b.add_argument("--json", action="store_true")
    b.add_argument("--float", action="store_true", help="floating-point moments (approximate)")
    b.add_argument("--v1", help="externally supplied v_1 (bounds become conditional)")
    b.add_argument("--v-le", dest="v_le", help="externally supplied v_1+...+v_M")
    add_cap(b)
    b.set_defaults(func=cmd_bounds)

    c = sub.add_parser("count", help="exact model count by enumeration")
    c.add_argument("file")
    add_cap(c)
    c.set_defaults(func=cmd_count)

    d = sub.add_parser("dist", help="exact histogram of u as JSON")
    d.add_argument("file")
    add_cap(d)
    d.set_defaults(func=cmd_dist)

    s = sub.add_parser("slim", help="normalise to slim-SAT; DIMACS out, JSON log")
    s.add_argument("file")
    s.add_argument("--out")
    s.add_argument("--log", help="write the JSON log here instead of stderr")
    s.set_defaults(func=cmd_slim)

    g = sub.add_parser("gen", help="reproducible random CNF")
    g.add_argument("--vars", type=int, required=True)
    g.add_argument("--clauses", type=int, required=True)
    g.add_argument("--width", type=_width, default=3, help="k or lo-hi")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out")
    g.add_argument("--json", action="store_true", help="emit the JSON formula schema")
    g.set_defaults(func=cmd_gen)

    cp = sub.add_parser("compare", help="CSV of every bound vs the exact count")
    cp.add_argument("directory", nargs="?")
    cp.add_argument("--vars", type=int)
    cp.add_argument("--clauses", type=int)
    cp.add_argument("--width", type=_width, default=3)
    cp.add_argument("--seeds", type=int, default=10)
    cp.add_argument("--seed-start", type=int, default=0)
    cp.add_argument("--workers", type=int, default=1)
    cp.add_argument("--out")
    cp.set_defaults(func=cmd_compare)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
