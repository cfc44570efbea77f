"""Command-line front end.

Subcommands:

  enumerate   stream or count a squarefree family
  lfun        build and write an L-cache (FFZLFC1 text format)
  stat        run a statistic over an n-list: ratios | moebius |
              onelevel | c5 | avgchar
  charcheck   run the character-identity suites
  constants   print the explicit-constants ledger

Failures exit nonzero with a JSON reason on stderr.  CSV/JSON/SVG
emission follows the report module's fixed schema.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from fractions import Fraction

import numpy as np

from . import __version__
from .fields import field_make
from .ffpoly import PolyQ, poly_from_index, squarefree_mask
from .kernels import TestKernel
from .lfamily import (build_family, cache_path, get_family, read_cache,
                      write_cache)
from .report import StatReport, render_figure, write_csv, write_json
from .stats import (QUADRATIC_PRESET, RatioSpec, average_char, estimate_C5,
                    moebius_cancellation, one_level_density,
                    ratio_average_empirical, recipe_main_term,
                    theorem_constants)
from .symchar import (Partition, decompose_sym_truncated,
                      decompose_wedge_oracle, near_zero_bounds_hold,
                      partitions_up_to, reconstruct_numerator,
                      skew_multiplicity, sp_character, sp_dimension_king,
                      check_multiplicity_bound, weyl_denominator)


def _fail(msg: str, code: int = 1):
    sys.stderr.write(json.dumps({"error": msg}) + "\n")
    raise SystemExit(code)


def _parse_nlist(text: str):
    return [int(x) for x in text.split(",") if x]


def _parse_shifts(text: str):
    return tuple(complex(x) for x in text.split(",") if x)


def _odd_prime_or_die(q: int):
    try:
        ctx = field_make(q, 1)
    except Exception as exc:
        _fail(f"q must be an odd prime: {exc}")
    if q % 2 == 0:
        _fail("q must be an odd prime")
    return ctx


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_enumerate(args):
    ctx = _odd_prime_or_die(args.q)
    mask = squarefree_mask(args.q, args.n)
    count = int(mask.sum())
    if not args.count_only:
        for idx in np.flatnonzero(mask):
            print("".join(str(d) for d in poly_from_index(ctx, args.n, int(idx)).digits()))
    note = "" if args.n >= 2 else " (n=1: closed formula q^n-q^(n-1) does not apply)"
    sys.stderr.write(f"count={count}{note}\n")
    return 0


def cmd_lfun(args):
    _odd_prime_or_die(args.q)
    t0 = time.time()
    method = args.method
    if method == "auto":
        method = "pointcount" if args.n % 2 else "charsum"
    try:
        fam = build_family(args.q, args.n, method=method)
    except Exception as exc:
        _fail(str(exc))
    out = args.out or cache_path(args.q, args.n)
    os.makedirs(os.path.dirname(os.path.abspath(out)), exist_ok=True)
    write_cache(fam, out)
    print(f"wrote {fam.size} records to {out} "
          f"(method={method}, {time.time() - t0:.2f}s)")
    return 0


def _emit(reports, args, default_stem):
    for r in reports:
        print(",".join(str(x) for x in r.row()))
    if args.out:
        write_csv(reports, args.out)
    if args.json:
        write_json(reports, args.json)
    if args.svg:
        path = args.svg if args.svg != "auto" else default_stem + ".svg"
        render_figure(reports, path)


def cmd_stat(args):
    _odd_prime_or_die(args.q)
    n_list = _parse_nlist(args.n)
    reports = []
    for n in n_list:
        t0 = time.time()
        if args.which == "ratios":
            spec = RatioSpec(K=args.K, Q=args.Q, shifts=_parse_shifts(args.s))
            value = ratio_average_empirical(args.q, n, spec)
            mt = recipe_main_term(args.q, n, spec, source=args.source)
            rep = StatReport(q=args.q, n=n, stat=f"ratios_K{args.K}Q{args.Q}",
                             value=value, reference=mt.value,
                             meta={"shifts": args.s, "rr_l": abs(mt.rr_l),
                                   "source": args.source})
        elif args.which == "moebius":
            value, numer, size = moebius_cancellation(args.q, n, args.R)
            rep = StatReport(q=args.q, n=n, stat=f"moebius_R{args.R}",
                             value=complex(value),
                             reference=complex(1.0 if args.R == 0 else 0.0),
                             meta={"numerator": numer, "family": size})
        elif args.which == "onelevel":
            kernel = TestKernel(shape=args.kernel, lam=args.lam)
            emp, ref = one_level_density(args.q, n, kernel)
            rep = StatReport(q=args.q, n=n, stat=f"onelevel_{args.kernel}",
                             value=complex(emp), reference=complex(ref),
                             meta={"lambda": args.lam})
        elif args.which == "c5":
            eps = tuple(1 if ch == "+" else -1 for ch in args.eps) if args.eps else ()
            Ns = tuple(int(x) for x in args.N.split(",")) if args.N else ()
            ests, diffs = estimate_C5(args.q, eps, Ns, [n])
            rep = StatReport(q=args.q, n=n, stat="c5",
                             value=complex(ests[0]["value"]),
                             meta={"eps": args.eps or "", "N": args.N or "",
                                   "diffs": diffs})
        elif args.which == "avgchar":
            ctx = field_make(args.q, 1)
            digits = tuple(int(ch) for ch in args.r)
            r = PolyQ.monic_from_digits(ctx, digits)
            emp, model = average_char(args.q, r, [n])
            rep = StatReport(q=args.q, n=n, stat="avgchar",
                             value=complex(float(emp[0]["value"])),
                             reference=complex(float(model)),
                             meta={"r_digits": args.r, "model": str(model)})
        else:
            _fail(f"unknown statistic {args.which!r}")
        rep.wall_time = time.time() - t0
        reports.append(rep)
    _emit(reports, args, f"stat_{args.which}_q{args.q}")
    return 0


def cmd_charcheck(args):
    checks = []
    t0 = time.time()
    if args.K > 2:
        _fail("charcheck supports K <= 2")
    try:
        for K in range(args.K + 1):
            for m in range(1, args.m + 1):
                oracle = decompose_wedge_oracle(K, m)
                ok = True
                for rho, mult in oracle.items():
                    closed = skew_multiplicity("Sp", rho, K, 2 * m)
                    ok = ok and closed == mult
                checks.append((f"skew_howe_K{K}_m{m}", ok))
        for lam in partitions_up_to(4, max_length=args.m):
            jt = sp_character(lam, args.m)
            wy = sp_character(lam, args.m, method="weyl")
            dim = jt.substitute_values((1,) * args.m)
            checks.append((f"sp_dual_formula_{lam.parts}",
                           jt == wy and dim == sp_dimension_king(lam, args.m)))
        import random
        rng = random.Random(7)
        xs = [rng.uniform(0, 50) for _ in range(10_000)]
        checks.append(("near_zero_lemma", near_zero_bounds_hold(xs)))
        for K in range(1, args.K + 1):
            ok = True
            dk = weyl_denominator(K)
            for rho in partitions_up_to(3, max_part=K):
                for c in (2 * rho.length + 2, 2 * rho.length + 4):
                    lhs = reconstruct_numerator("Sp", rho, K, c)
                    rhs = skew_multiplicity("Sp", rho, K, c) * dk
                    ok = ok and lhs == rhs
            checks.append((f"stable_numerators_K{K}", ok))
        if args.K >= 1:
            rng = random.Random(11)
            pts = [tuple(complex(rng.uniform(0.4, 2.0), rng.uniform(-1, 1))
                         for _ in range(1)) for _ in range(50)]
            recs = check_multiplicity_bound(Partition((1,)), 1, 4, pts)
            checks.append(("multiplicity_bound", all(r[3] for r in recs)))
        if args.Q >= 1:
            deco = decompose_sym_truncated(args.Q, max(args.Q, 2), args.D,
                                           verify_rank_stability=True)
            ok = all(mu.length <= args.Q for mu in deco)
            checks.append((f"sym_decompose_Q{args.Q}", ok))
    except Exception as exc:
        _fail(f"charcheck crashed: {exc}")
    width = max(len(name) for name, _ in checks)
    failed = 0
    for name, ok in checks:
        print(f"{name:<{width}}  {'pass' if ok else 'FAIL'}")
        failed += 0 if ok else 1
    print(f"{len(checks) - failed}/{len(checks)} checks passed "
          f"({time.time() - t0:.2f}s)")
    return 1 if failed else 0


def cmd_constants(args):
    if args.preset == "quadratic":
        led = theorem_constants(args.K, args.Q, **QUADRATIC_PRESET)
    else:
        led = theorem_constants(args.K, args.Q, C0=args.C0, C1=args.C1,
                                C1p=args.C1p, C2=args.C2, C3=args.C3)
    for k, v in led.as_dict().items():
        print(f"{k:10s} = {v}")
    if led.qmin_exact:
        print(f"{'q_min':10s} = 2^{led.qmin_log2}")
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser():
    p = argparse.ArgumentParser(prog="ffzeta",
                                description="quadratic L-functions over F_q[t]: "
                                            "exact data, statistics, and character checks")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    pe = sub.add_parser("enumerate", help="stream a squarefree family")
    pe.add_argument("--q", type=int, required=True)
    pe.add_argument("--n", type=int, required=True)
    pe.add_argument("--count-only", action="store_true")
    pe.set_defaults(func=cmd_enumerate)

    pl = sub.add_parser("lfun", help="build an L-cache")
    pl.add_argument("--q", type=int, required=True)
    pl.add_argument("--n", type=int, required=True)
    pl.add_argument("--method", choices=["auto", "charsum", "pointcount", "both"],
                    default="auto")
    pl.add_argument("--out", default=None)
    pl.set_defaults(func=cmd_lfun)

    ps = sub.add_parser("stat", help="run a family statistic")
    ps.add_argument("which", choices=["ratios", "moebius", "onelevel", "c5", "avgchar"])
    ps.add_argument("--q", type=int, required=True)
    ps.add_argument("--n", type=str, required=True, help="comma-separated n list")
    ps.add_argument("--K", type=int, default=0)
    ps.add_argument("--Q", type=int, default=0)
    ps.add_argument("--s", type=str, default="", help="comma-separated shifts")
    ps.add_argument("--R", type=int, default=0)
    ps.add_argument("--kernel", choices=["triangle", "cosine"], default="triangle")
    ps.add_argument("--lambda", dest="lam", type=float, default=1.0)
    ps.add_argument("--eps", type=str, default="", help="signs like '+-' for c5")
    ps.add_argument("--N", type=str, default="", help="coefficient indices for c5")
    ps.add_argument("--r", type=str, default="", help="digit string for avgchar")
    ps.add_argument("--source", choices=["model", "empirical"], default="model")
    ps.add_argument("--seed", type=int, default=0)
    ps.add_argument("--workers", type=int, default=1)
    ps.add_argument("--out", default=None, help="CSV path")
    ps.add_argument("--json", default=None, help="JSON path")
    ps.add_argument("--svg", default=None, help="SVG path ('auto' for default)")
    ps.set_defaults(func=cmd_stat)

    pc = sub.add_parser("charcheck", help="character identity suites")
    pc.add_argument("--K", type=int, default=1)
    pc.add_argument("--m", type=int, default=2)
    pc.add_argument("--Q", type=int, default=0)
    pc.add_argument("--D", type=int, default=6)
    pc.set_defaults(func=cmd_charcheck)

    pk = sub.add_parser("constants", help="explicit constants ledger")
    pk.add_argument("--K", type=int, required=True)
    pk.add_argument("--Q", type=int, required=True)
    pk.add_argument("--preset", choices=["quadratic", "custom"], default="quadratic")
    pk.add_argument("--C0", type=int, default=1)
    pk.add_argument("--C1", type=int, default=2)
    pk.add_argument("--C1p", type=int, default=1)
    pk.add_argument("--C2", type=int, default=12)
    pk.add_argument("--C3", type=int, default=13)
    pk.set_defaults(func=cmd_constants)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SystemExit:
        raise
    except Exception as exc:  # uniform machine-readable failure
        _fail(f"{type(exc).__name__}: {exc}")


if __name__ == "__main__":
    sys.exit(main())
