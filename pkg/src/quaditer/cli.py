"""Command-line entry point: ``quaditer <subcommand> [options]``.

Every subcommand prints (or writes with ``--out``) a JSON document or CSV
table, and exits with status 1 when one of its checks fails.
"""
from __future__ import annotations

import argparse
import sys
from typing import Optional

from . import exact, graphs
from .experiments import (
    REFERENCE_BINS,
    ExperimentConfig,
    corollary1_scan,
    exact_str,
    factor_with_restarts,
    lemma1_sweep,
    table1,
    theorem1_sweep,
    translate_general_quadratic,
    write_report,
)
from .field import CubicMap, FieldContext, GeneralQuadMap, QuadMap, verify_factorization
from .moments import image_sizes, moments, rho_histogram, zero_count_via_moments
from .orbits import critical_orbit_distinct, first_recurrence, orbit_shape


def _common(sp: argparse.ArgumentParser, *, prime: bool = False, many_primes: bool = False):
    if many_primes:
        sp.add_argument("--prime", type=int, action="append", required=True,
                        help="odd prime (repeatable)")
    elif prime:
        sp.add_argument("--prime", type=int, required=True)
    sp.add_argument("--format", choices=("json", "csv"), default="json")
    sp.add_argument("--out", default=None, help="write output here instead of stdout")


def _emit(args, rows, meta=None) -> None:
    text = write_report(rows, args.out, args.format, meta)
    if not args.out:
        sys.stdout.write(text)


def cmd_mu(args) -> int:
    rows = []
    ok = True
    for r in range(args.r + 1):
        num, den = exact.nu_pair(r)
        row = {"r": r, "mu": str(exact.mu(r)), "nu": f"{num}/{den}" if r <= 12 else None,
               "mu_float": float(exact.mu(r))}
        if r >= 1:
            row["nu_bounds"] = exact.check_nu_bounds(r)
            ok &= row["nu_bounds"]
        rows.append(row)
    _emit(args, rows)
    return 0 if ok else 1


def cmd_nu_weights(args) -> int:
    w = exact.nu_weights(args.r)
    rows = [{"m": m, "weight": str(v)} for m, v in w.items()]
    total_ok = w.total() == 1
    _emit(args, rows, {"r": args.r, "sum_is_one": total_ok})
    return 0 if total_ok else 1


def cmd_curve_counts(args) -> int:
    table = exact.curve_count_table(args.rmax, args.kmax)
    rows = [{"r": r, "k": k, "count": table[r][k]}
            for r in range(args.rmax + 1) for k in range(args.kmax + 1)]
    _emit(args, rows)
    return 0


def cmd_coeffs(args) -> int:
    cs = exact.falling_coeffs(args.r)
    rows = [{"k": k, "C": exact_str(c)} for k, c in enumerate(cs)]
    _emit(args, rows, {"r": args.r})
    return 0


def cmd_proper_graphs(args) -> int:
    n = graphs.count_proper(args.d, args.k, workers=args.threads)
    expected = exact.curve_count(args.d + 1, args.k)
    rows = []
    if args.list:
        rows = [{"index": i, "weights": G.matrix()}
                for i, G in enumerate(graphs.enumerate_proper(args.d, args.k))]
    _emit(args, rows, {"D": args.d, "k": args.k, "count": n, "curve_count": expected})
    return 0 if n == expected else 1


def _quad(args) -> QuadMap:
    return QuadMap(FieldContext(args.prime), args.a, args.c)


def cmd_orbit(args) -> int:
    ctx = FieldContext(args.prime)
    if args.cubic:
        f = CubicMap(ctx, args.c)
    elif args.b:
        f = GeneralQuadMap(ctx, args.a, args.b, args.c)
    else:
        f = QuadMap(ctx, args.a, args.c)
    shape = orbit_shape(f, args.m)
    meta = {"map": str(f), "m": args.m, "tail": shape.tail, "cycle": shape.cycle}
    if isinstance(f, QuadMap):
        i, j = first_recurrence(f)
        meta["critical_first_recurrence"] = {"i": i, "j": j}
    _emit(args, [], meta)
    return 0


def cmd_image_size(args) -> int:
    f = _quad(args)
    sizes = image_sizes(f, args.r)
    ok, pair = critical_orbit_distinct(f, args.r)
    rows = []
    for r, size in enumerate(sizes):
        main = exact.mu(r).to_fraction() * f.ctx.p
        rows.append({"r": r, "size": size, "mu_r_p": exact_str(main),
                     "deviation": exact_str(size - main)})
    _emit(args, rows, {"map": str(f), "hypothesis": ok,
                       "collision": list(pair) if pair else None})
    return 0


def cmd_moments(args) -> int:
    f = _quad(args)
    ms = moments(f, args.r, args.k)
    rows = [{"k": k, "N": n, "curve_count": exact.curve_count(args.r, k)}
            for k, n in enumerate(ms)]
    _emit(args, rows, {"map": str(f), "r": args.r})
    return 0 if ms[1] == f.ctx.p else 1


def cmd_identity_check(args) -> int:
    f = _quad(args)
    rows = []
    ok = True
    for r in range(args.r + 1):
        zeros = rho_histogram(f, r).zeros
        via = zero_count_via_moments(f, r)
        fact = verify_factorization(f, r) if r >= 1 else True
        rows.append({"r": r, "zeros_direct": zeros, "zeros_via_moments": via,
                     "factorization": fact})
        ok &= zeros == via and fact
    _emit(args, rows, {"map": str(f), "ok": ok})
    return 0 if ok else 1


def cmd_table1(args) -> int:
    rep = table1(args.prime, offset=args.offset, workers=args.threads)
    meta = rep.summary()
    ok = sum(rep.bins) == args.prime - 1
    if args.prime in REFERENCE_BINS:
        meta["reference"] = list(REFERENCE_BINS[args.prime])
        meta["matches_reference"] = rep.bins == REFERENCE_BINS[args.prime]
    _emit(args, rep.rows(), meta)
    return 0 if ok else 1


def _config(args) -> ExperimentConfig:
    return ExperimentConfig(args.prime, args.r, args.samples, args.seed, args.threads,
                            args.out, args.format)


def cmd_sweep(args) -> int:
    cfg = _config(args)
    rep = theorem1_sweep(cfg) if args.command == "theorem1-sweep" else lemma1_sweep(cfg)
    _emit(args, rep.rows(), {"kind": rep.kind, "ok": rep.ok, "summary": rep.summary,
                             "skipped": rep.skipped})
    return 0 if rep.ok else 1


def cmd_corollary1(args) -> int:
    scans = corollary1_scan(_config(args))
    rows = [rec for s in scans for rec in s.rows()]
    _emit(args, rows, {"summary": [s.summary for s in scans]})
    return 0 if all(s.ok for s in scans) else 1


def cmd_pollard(args) -> int:
    res = factor_with_restarts(args.n, args.a, args.c, args.m, restarts=args.restarts,
                               max_steps=args.max_steps)
    if res is None:
        _emit(args, [], {"N": args.n, "factor": None})
        return 1
    d, attempts = res
    _emit(args, [], {"N": args.n, "factor": d, "cofactor": args.n // d, "attempts": attempts})
    return 0 if args.n % d == 0 else 1


def cmd_translate(args) -> int:
    a, c2, d = translate_general_quadratic(args.prime, args.a, args.b, args.c)
    _emit(args, [], {"p": args.prime, "a": a, "c_prime": c2, "d": d})
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="quaditer", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("mu", help="exact mu_r, nu_r and the nu_r bounds")
    sp.add_argument("--r", type=int, required=True)
    _common(sp)
    sp.set_defaults(func=cmd_mu)

    sp = sub.add_parser("nu-weights", help="weights nu(r;m) of E(X;r)")
    sp.add_argument("--r", type=int, required=True)
    _common(sp)
    sp.set_defaults(func=cmd_nu_weights)

    sp = sub.add_parser("curve-counts", help="table of curve counts N(r;k)")
    sp.add_argument("--rmax", type=int, required=True)
    sp.add_argument("--kmax", type=int, required=True)
    _common(sp)
    sp.set_defaults(func=cmd_curve_counts)

    sp = sub.add_parser("coeffs", help="indicator coefficients C_{r,k}")
    sp.add_argument("--r", type=int, required=True)
    _common(sp)
    sp.set_defaults(func=cmd_coeffs)

    sp = sub.add_parser("proper-graphs", help="count (and list) proper (D,k)-graphs")
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--list", action="store_true")
    sp.add_argument("--threads", type=int, default=1)
    _common(sp)
    sp.set_defaults(func=cmd_proper_graphs)

    sp = sub.add_parser("orbit", help="tail and cycle length of a trajectory")
    sp.add_argument("--a", type=int, default=1)
    sp.add_argument("--b", type=int, default=0)
    sp.add_argument("--c", type=int, default=0)
    sp.add_argument("--m", type=int, default=0)
    sp.add_argument("--cubic", action="store_true", help="use X^3 + c instead")
    _common(sp, prime=True)
    sp.set_defaults(func=cmd_orbit)

    for name, func, helptext in (
        ("image-size", cmd_image_size, "#f^r(F_p) against mu_r p"),
        ("identity-check", cmd_identity_check, "zero count via moments and the product identity"),
    ):
        sp = sub.add_parser(name, help=helptext)
        sp.add_argument("--a", type=int, default=1)
        sp.add_argument("--c", type=int, default=1)
        sp.add_argument("--r", type=int, default=3)
        _common(sp, prime=True)
        sp.set_defaults(func=func)

    sp = sub.add_parser("moments", help="moments N(r;k) of the preimage counts")
    sp.add_argument("--a", type=int, default=1)
    sp.add_argument("--c", type=int, default=1)
    sp.add_argument("--r", type=int, default=2)
    sp.add_argument("--k", type=int, default=4)
    _common(sp, prime=True)
    sp.set_defaults(func=cmd_moments)

    sp = sub.add_parser("table1", help="binned cycle lengths of 0 under X^3 + c")
    sp.add_argument("--threads", type=int, default=1)
    sp.add_argument("--offset", type=int, choices=(0, 1), default=1,
                    help="bin (l - offset)/p; 1 reproduces the reference counts")
    _common(sp, prime=True)
    sp.set_defaults(func=cmd_table1)

    for name, func, r_default in (
        ("theorem1-sweep", cmd_sweep, 3),
        ("lemma1-sweep", cmd_sweep, 4),
        ("corollary1-scan", cmd_corollary1, 0),
    ):
        sp = sub.add_parser(name)
        sp.add_argument("--r", type=int, default=r_default)
        sp.add_argument("--samples", type=int, default=100)
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--threads", type=int, default=1)
        _common(sp, many_primes=True)
        sp.set_defaults(func=func)

    sp = sub.add_parser("pollard", help="Pollard rho with Floyd pairing")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--a", type=int, default=1)
    sp.add_argument("--c", type=int, default=1)
    sp.add_argument("--m", type=int, default=2)
    sp.add_argument("--restarts", type=int, default=10)
    sp.add_argument("--max-steps", type=int, default=1 << 22)
    _common(sp)
    sp.set_defaults(func=cmd_pollard)

    sp = sub.add_parser("translate", help="conjugate aX^2 + bX + c to aX^2 + c'")
    sp.add_argument("--a", type=int, required=True)
    sp.add_argument("--b", type=int, required=True)
    sp.add_argument("--c", type=int, required=True)
    _common(sp, prime=True)
    sp.set_defaults(func=cmd_translate)
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, ArithmeticError, RuntimeError) as exc:
        print(f"quaditer {args.command}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
