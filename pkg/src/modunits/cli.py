"""Command-line interface.

Exit codes: 0 success or true verdict, 1 false verdict, 2 usage error
(bad level, malformed input), 3 internal check failure.
"""

import argparse
import csv
import io
import json
import os
import sys
import tempfile
import time
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

from .curve import InvalidLevel, cusps, level_new, valid_levels
from .cuspgroup import (
    NotGaloisInvariant,
    TheoremViolation,
    rationalize,
    verify_theorem3,
)
from .eta import eta_divisor, eta_qexp, label, pair_count
from .oracle import modularity_check_numeric
from .serialize import (
    SchemaError,
    divisor_from_json,
    divisor_to_json,
    dumps,
    load_file,
    vector_from_json,
    vector_to_json,
)
from .units import check_theorem1, unit_basis, unit_basis_rational

CACHE_ENV = "MODUNITS_CACHE"
CACHE_SCHEMA = "modunits-sweep-v1"
CSV_COLUMNS = ["N", "n", "M", "cusps", "pairs", "unit_rank", "C", "C_Q", "C_fixed", "equal", "seconds"]


class UsageError(Exception):
    pass


def _level(N):
    try:
        return level_new(N)
    except InvalidLevel as exc:
        raise UsageError(str(exc)) from exc


def _emit(obj):
    print(dumps(obj))


def _same_level(level, obj):
    if obj.level != level:
        raise UsageError(f"input is for level {obj.level.N}, not {level.N}")


def _coord(x):
    x = Fraction(x)
    return x.numerator if x.denominator == 1 else str(x)


# --- subcommands ---------------------------------------------------------------


def cmd_cusps(args):
    level = _level(args.level)
    xs = cusps(level)
    if args.json:
        _emit({"level": level.N, "cusps": [{"c": x.c, "a": x.a, "width": x.width} for x in xs]})
    else:
        print(f"level {level.N} = {level.n}^2 * {level.M}: {len(xs)} cusps")
        for x in xs:
            name = "oo" if x.is_infinity(level) else str(x)
            print(f"{name}\tc={x.c}\ta={x.a}\twidth={x.width}")
    return 0


def cmd_eta_divisor(args):
    level = _level(args.level)
    try:
        lab = label(level, args.m, args.k)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    _emit(divisor_to_json(eta_divisor(level, lab)))
    return 0


def cmd_q_expansion(args):
    level = _level(args.level)
    if args.terms < 1:
        raise UsageError("--terms must be at least 1")
    try:
        lab = label(level, args.m, args.k)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    s = eta_qexp(lab, args.terms)
    _emit(
        {
            "level": level.N,
            "m": lab.m,
            "k": lab.k,
            "h": lab.h,
            "offset": str(s.offset),
            "phase": str(s.phase.exponent),
            "coefficients": [[_coord(c) for c in a.coords] for a in s.coeffs],
        }
    )
    return 0


def cmd_check_unit(args):
    level = _level(args.level)
    v = vector_from_json(load_file(args.infile))
    _same_level(level, v)
    ok, failed = check_theorem1(v)
    print("pass" if ok else f"fail {failed}")
    return 0 if ok else 1


def cmd_unit_basis(args):
    level = _level(args.level)
    basis = unit_basis_rational(level) if args.rational else unit_basis(level).basis
    _emit({"level": level.N, "rational": bool(args.rational), "basis": [vector_to_json(v) for v in basis]})
    return 0


def class_group_record(level):
    rep = verify_theorem3(level)
    return {"level": level.N, "C": list(rep.C), "C_Q": list(rep.C_Q), "C_fixed": list(rep.C_fixed), "equal": rep.equal}


def cmd_class_group(args):
    level = _level(args.level)
    rec = class_group_record(level)
    _emit(rec)
    return 0 if rec["equal"] else 1


def cmd_rationalize(args):
    level = _level(args.level)
    D = divisor_from_json(load_file(args.infile))
    _same_level(level, D)
    if not D.is_integral() or D.degree() != 0:
        raise UsageError("divisor must be integral of degree 0")
    try:
        res = rationalize(D)
    except NotGaloisInvariant as exc:
        print(f"false: {exc}", file=sys.stderr)
        return 1
    out = divisor_to_json(res.divisor)
    if args.outfile:
        _atomic_write(args.outfile, dumps(out) + "\n")
    else:
        _emit(out)
    note = " (correction factor)" if res.corrected else ""
    note += " (lattice search fallback)" if res.fallback else ""
    print(f"order {res.order}; unit {dumps(vector_to_json(res.unit))}{note}", file=sys.stderr)
    return 0


# --- sweeps ----------------------------------------------------------------------


def _fmt_factors(fs):
    return "x".join(map(str, fs)) if fs else "1"


def sweep_record(N):
    """One SweepReport row; `seconds` is wall time of the computation."""
    t0 = time.perf_counter()
    level = level_new(N)
    rep = verify_theorem3(level)
    rec = {
        "N": level.N,
        "n": level.n,
        "M": level.M,
        "cusps": len(cusps(level)),
        "pairs": pair_count(level),
        "unit_rank": unit_basis(level).rank,
        "C": _fmt_factors(rep.C),
        "C_Q": _fmt_factors(rep.C_Q),
        "C_fixed": _fmt_factors(rep.C_fixed),
        "equal": rep.equal,
    }
    rec["seconds"] = round(time.perf_counter() - t0, 4)
    return rec


def _atomic_write(path, text):
    d = os.path.dirname(os.path.abspath(path))
    os.makedirs(d, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _cache_path(cache, N):
    return os.path.join(cache, f"level-{N}.json")


def _cached_record(args):
    N, cache = args
    if cache:
        path = _cache_path(cache, N)
        try:
            with open(path) as fh:
                data = json.load(fh)
            if data.get("schema") == CACHE_SCHEMA and data.get("record", {}).get("N") == N:
                return data["record"]
        except (OSError, ValueError):
            pass
    rec = sweep_record(N)
    if cache:
        _atomic_write(_cache_path(cache, N), json.dumps({"schema": CACHE_SCHEMA, "record": rec}, sort_keys=True))
    return rec


def cmd_verify_thm3(args):
    if args.max_level < 1:
        raise UsageError("--max-level must be positive")
    levels = valid_levels(args.max_level)
    for N in args.include or []:
        _level(N)
        if N not in levels:
            levels.append(N)
    cache = args.cache or os.environ.get(CACHE_ENV) or None
    work = [(N, cache) for N in levels]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            records = list(pool.map(_cached_record, work))
    else:
        records = [_cached_record(w) for w in work]
    failures = 0
    for rec in records:
        if not rec["equal"]:
            failures += 1
        print(f"N={rec['N']} n={rec['n']} C={rec['C']} C_Q={rec['C_Q']} C_fixed={rec['C_fixed']} equal={str(rec['equal']).lower()}")
    print(f"{len(records)} levels, {failures} with C_Q != C(Q)")
    if args.report:
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
        w.writeheader()
        for rec in records:
            w.writerow({**rec, "equal": str(rec["equal"]).lower()})
        _atomic_write(args.report, buf.getvalue())
    return 0 if failures == 0 else 1


def cmd_oracle_check(args):
    level = _level(args.level)
    v = vector_from_json(load_file(args.infile))
    _same_level(level, v)
    if v.weight_sum() != 0:
        raise UsageError("numeric check needs exponents summing to 0")
    ok = modularity_check_numeric(v, trials=args.trials, tolerance=args.tolerance, seed=args.seed)
    exact, failed = check_theorem1(v)
    print(f"numeric {'pass' if ok else 'fail'}; criterion {'pass' if exact else 'fail ' + failed}")
    return 0 if ok else 1


# --- entry point -----------------------------------------------------------------


def build_parser():
    p = argparse.ArgumentParser(prog="modunits", description="Modular units and cuspidal groups of X_0(N), N = n^2 M.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("cusps", help="list the cusps of X_0(N)")
    s.add_argument("--level", type=int, required=True)
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_cusps)

    for name, func, extra in (("eta-divisor", cmd_eta_divisor, False), ("q-expansion", cmd_q_expansion, True)):
        s = sub.add_parser(name)
        s.add_argument("--level", type=int, required=True)
        s.add_argument("--m", type=int, required=True)
        s.add_argument("--k", type=int, default=0)
        if extra:
            s.add_argument("--terms", type=int, default=10)
        s.set_defaults(func=func)

    s = sub.add_parser("check-unit", help="test the modularity criterion on an exponent vector")
    s.add_argument("--level", type=int, required=True)
    s.add_argument("--in", dest="infile", required=True)
    s.set_defaults(func=cmd_check_unit)

    s = sub.add_parser("unit-basis")
    s.add_argument("--level", type=int, required=True)
    s.add_argument("--rational", action="store_true")
    s.set_defaults(func=cmd_unit_basis)

    s = sub.add_parser("class-group")
    s.add_argument("--level", type=int, required=True)
    s.set_defaults(func=cmd_class_group)

    s = sub.add_parser("rationalize")
    s.add_argument("--level", type=int, required=True)
    s.add_argument("--in", dest="infile", required=True)
    s.add_argument("--out", dest="outfile")
    s.set_defaults(func=cmd_rationalize)

    s = sub.add_parser("verify-thm3", help="compare C_Q(N) and C(N)(Q) for all valid N up to a bound")
    s.add_argument("--max-level", type=int, required=True)
    s.add_argument("--include", type=int, action="append", help="extra level to sweep (repeatable)")
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--cache", help=f"cache directory (default: ${CACHE_ENV})")
    s.add_argument("--report", help="write a CSV report")
    s.set_defaults(func=cmd_verify_thm3)

    s = sub.add_parser("oracle-check", help="numeric modularity check of an exponent vector")
    s.add_argument("--level", type=int, required=True)
    s.add_argument("--in", dest="infile", required=True)
    s.add_argument("--trials", type=int, default=50)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--tolerance", type=float, default=1e-8)
    s.set_defaults(func=cmd_oracle_check)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, SchemaError, InvalidLevel, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (TheoremViolation, AssertionError) as exc:
        print(f"internal check failed: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
