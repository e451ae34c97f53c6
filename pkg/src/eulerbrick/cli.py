"""Command-line front end.

Exit codes: 0 clean, 1 usage or runtime error, 2 mathematical finding
(a square f1*f2: a perfect-brick candidate must never be lost in a script).
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction

from . import __version__
from .curves import EllipticFamily, f_value, torsion_subgroup
from .descent import (
    check_c_primes,
    check_delta_generic,
    d3_obstruction,
    descent_class,
    harvest_points,
)
from .kummer import (
    GROUP,
    divisor_of_f,
    order4_elements,
    parity_table,
    verify_translation_identities,
)
from .param import check_brick, enumerate_euclid_pairs, family_params
from .search import (
    DEFAULT_SIEVE_SPECIALIZATIONS,
    SweepConfig,
    blocker_analysis,
    gaussian_blocker_check,
    modular_sieve,
    sweep,
)
from .sweepcore import BACKEND

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_FINDING = 2


def parse_rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational: {text!r} ({exc})")


def parse_pair(text: str) -> Fraction:
    try:
        a, b = (int(t) for t in text.split(","))
        return Fraction(a, b)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not an a,b pair: {text!r} ({exc})")


def _s_from(args) -> Fraction:
    if getattr(args, "pair", None) is not None:
        return args.pair
    if getattr(args, "s", None) is not None:
        return args.s
    raise ValueError("one of --s or --pair is required")


def _emit(args, payload: dict, text_lines: list[str]) -> None:
    if args.json:
        print(json.dumps(payload, indent=2, default=str))
    else:
        for line in text_lines:
            print(line)


def _add_s_arguments(sub) -> None:
    sub.add_argument("--s", type=parse_rational, help="specialization as p/q")
    sub.add_argument("--pair", type=parse_pair, help="specialization as a,b (s = a/b)")


def cmd_pairs(args) -> int:
    pairs = list(enumerate_euclid_pairs(args.max, parity_filter=args.parity))
    if args.json:
        print(json.dumps({"max": args.max, "parity": args.parity, "count": str(len(pairs)),
                          "pairs": [[p.a, p.b] for p in pairs] if not args.count else None}))
    else:
        if not args.count:
            for p in pairs:
                print(f"{p.a} {p.b}")
        print(f"pairs: {len(pairs)}")
    return EXIT_OK


def cmd_sweep(args) -> int:
    config = SweepConfig(
        max_param=args.max,
        parity=args.parity,
        both_factors=args.both_factors,
        prefilter=not args.no_prefilter,
        jobs=args.jobs,
        checkpoint_path=args.checkpoint,
        out_path=args.out,
    )
    result = sweep(config)
    stats = result.stats
    payload = {"backend": BACKEND, "stats": stats.to_json(),
               "findings": [f.record() for f in result.findings]}
    _emit(args, payload, [
        f"tuples: {stats.tuples}, squares: {stats.squares}"
        + (f", prefilter survivors: {stats.prefilter_survivors}" if config.prefilter else ""),
    ])
    for f in result.findings:
        print(f"FINDING: square f1*f2 at (a,b,m,n) = ({f.a},{f.b},{f.m},{f.n})", file=sys.stderr)
    return EXIT_FINDING if result.findings else EXIT_OK


def cmd_blockers(args) -> int:
    config = SweepConfig(
        max_param=args.max,
        parity=args.parity,
        jobs=args.jobs,
        checkpoint_path=args.checkpoint,
        out_path=args.out,
    )
    result = blocker_analysis(config)
    stats = result.stats
    total = stats.tuples or 1
    lines = [f"tuples: {stats.tuples}, squares: {stats.squares}"]
    for cls in ("2", "1mod4", "3mod4"):
        n = stats.blocker_classes.get(cls, 0)
        lines.append(f"blocker {cls:>6}: {n:>10}  ({100.0 * n / total:.4f}%)")
    smallest = sorted(stats.blocker_primes.items())[:10]
    lines.append("most common small blockers: " + ", ".join(f"{p} (x{c})" for p, c in smallest))
    _emit(args, {"stats": stats.to_json()}, lines)
    return EXIT_FINDING if result.findings else EXIT_OK


def cmd_sieve(args) -> int:
    values = args.s or list(DEFAULT_SIEVE_SPECIALIZATIONS)
    reports = [modular_sieve(s, height=args.height, prime_bound=args.prime_bound) for s in values]
    payload = {
        "reports": [
            {
                "s": str(r.s),
                "height": r.height,
                "primes": list(r.primes),
                "candidates": str(r.candidates),
                "survivors": [[u, w] for (u, w) in r.survivors],
            }
            for r in reports
        ]
    }
    lines = [
        f"s = {r.s}: candidates = {r.candidates}, primes = {len(r.primes)}, "
        f"survivors = {len(r.survivors)}"
        for r in reports
    ]
    total = sum(len(r.survivors) for r in reports)
    lines.append(f"total survivors: {total}")
    _emit(args, payload, lines)
    return EXIT_OK


def cmd_brick_check(args) -> int:
    report = check_brick(args.e1, args.e2, args.e3)
    payload = {
        "edges": list(report.edges),
        "faces": [{"square": f.ok, "root": f.root} for f in report.faces],
        "space": {"square": report.space.ok, "root": report.space.root},
        "is_euler": report.is_euler,
        "is_perfect": report.is_perfect,
    }
    names = ("d12", "d23", "d13")
    lines = [
        f"{n}: " + (f"{f.root}" if f.ok else "not integral")
        for n, f in zip(names, report.faces)
    ]
    lines.append("space diagonal: " + (f"{report.space.root}" if report.space.ok else "not integral"))
    lines.append(f"Euler brick: {'yes' if report.is_euler else 'no'}")
    lines.append(f"perfect brick: {'yes' if report.is_perfect else 'no'}")
    _emit(args, payload, lines)
    return EXIT_FINDING if report.is_perfect else EXIT_OK


def cmd_curve_info(args) -> int:
    s = _s_from(args)
    params = family_params(s)
    curve = EllipticFamily.from_params(params)
    tors = torsion_subgroup(curve)
    payload = {
        "s": str(params.s),
        "c": str(params.c),
        "kappa": str(params.kappa),
        "A": str(params.A),
        "roots": [str(r) for r in curve.roots],
        "torsion": f"Z/{tors.structure[0]} x Z/{tors.structure[1]}",
        "torsion_order": tors.order,
        "order4_point": str((tors.t4.x, tors.t4.y)) if tors.t4 else None,
        "double_t4": f"T{tors.double_t4_label}" if tors.double_t4_label else None,
    }
    lines = [
        f"s = {params.s}",
        f"c = {params.c}",
        f"kappa = {params.kappa}",
        f"A = {params.A}",
        f"roots: x = {curve.roots[0]}, {curve.roots[1]}, {curve.roots[2]}",
        f"torsion: Z/{tors.structure[0]} x Z/{tors.structure[1]} ({tors.order} points)",
    ]
    if tors.t4:
        lines.append(f"order-4 point: {tors.t4}, doubling to T{tors.double_t4_label}")
    _emit(args, payload, lines)
    return EXIT_OK


def cmd_torsion(args) -> int:
    curve = EllipticFamily.at(_s_from(args))
    tors = torsion_subgroup(curve)
    payload = {
        "structure": f"Z/{tors.structure[0]} x Z/{tors.structure[1]}",
        "points": [str(P) for P in tors.points],
    }
    lines = [f"torsion: Z/{tors.structure[0]} x Z/{tors.structure[1]}"]
    for P in tors.points:
        lines.append(f"  {P} (order {P.order()})")
    _emit(args, payload, lines)
    return EXIT_OK


def cmd_kummer_verify(args) -> int:
    s = _s_from(args)
    report = verify_translation_identities(
        s, trials=args.trials, prime_bound=args.prime_bound, seed=args.seed
    )
    curve = EllipticFamily.at(s)
    divisor, embedding = divisor_of_f(curve)
    tables = [parity_table(divisor, t4) for t4 in order4_elements()]
    payload = {
        "s": str(s),
        "identities": {
            "primes": len(report.primes),
            "checked": report.checked,
            "excluded": report.excluded,
            "failures": report.failures,
        },
        "parity_rows": {str(t.translation): list(t.row) for t in tables},
        "all_odd": all(t.all_odd for t in tables),
    }
    lines = [
        f"translation identities over {len(report.primes)} primes: "
        f"{report.checked} checked, {report.excluded} excluded, {report.failures} failures",
        f"divisor embedding: 2*T4 = {next(k for k, v in embedding.items() if v == (2, 0))}",
    ]
    for t in tables:
        lines.append(f"translate {t.translation}: row {t.row} all_odd={t.all_odd}")
    _emit(args, payload, lines)
    return EXIT_OK if report.passed and all(t.all_odd for t in tables) else EXIT_ERROR


def cmd_descent(args) -> int:
    curve = EllipticFamily.at(_s_from(args))
    tors = torsion_subgroup(curve)
    points = harvest_points(curve, height=args.height)
    lines = [f"harvested {len(points)} points (height {args.height})"]
    rows = []
    for P in points:
        rep = d3_obstruction(curve, P, torsion_points=tors.points)
        delta = rep.descent
        rows.append(
            {
                "x": str(rep.x),
                "delta": [delta.delta1, delta.delta2, delta.delta3],
                "torsion": rep.is_torsion,
                "f_class": rep.f_class,
                "case_a_applies": rep.case_a_applies,
                "case_a_ok": rep.case_a_ok,
                "case_b_ok": rep.case_b_ok,
                "residual_class": rep.residual_class,
            }
        )
        tag = "torsion" if rep.is_torsion else "non-torsion"
        flags = ""
        if rep.residual_class:
            flags += " RESIDUAL"
        if rep.case_a_ok is False:
            flags += " SQUARE-CLASS-FINDING (delta3 = 1 but f-class != 2)"
        lines.append(
            f"  x = {rep.x}: delta = ({delta.delta1}, {delta.delta2}, {delta.delta3})"
            f" [{tag}] f-class {rep.f_class}" + flags
        )
    _emit(args, {"points": rows}, lines)
    return EXIT_OK


def cmd_delta_generic(args) -> int:
    if args.s is not None or args.pair is not None:
        values = [_s_from(args)]
    else:
        rng = random.Random(args.seed)
        values = []
        while len(values) < args.trials:
            num = rng.randint(-50, 50)
            den = rng.randint(1, 50)
            if num and abs(num) != den:
                values.append(Fraction(num, den))
    reports = [check_delta_generic(s) for s in values]
    ok = all(r.ok for r in reports)
    lines = [
        f"s = {r.s}: classes ({r.delta1_class}, {r.delta2_class}) {'ok' if r.ok else 'FAIL'}"
        for r in reports
    ]
    lines.append(f"all ok: {ok}")
    _emit(args, {"ok": ok, "count": len(reports)}, lines)
    return EXIT_OK if ok else EXIT_ERROR


def cmd_c_primes(args) -> int:
    if args.s is not None or args.pair is not None:
        values = [_s_from(args)]
    else:
        rng = random.Random(args.seed)
        values = []
        while len(values) < args.trials:
            num = rng.randint(2, 80)
            den = rng.randint(1, 80)
            if num != den:
                values.append(Fraction(num, den))
    reports = [check_c_primes(s) for s in values]
    ok = all(r.ok for r in reports)
    lines = []
    for r in reports:
        vals = ", ".join(f"v_{p} = {v}" for p, v in r.valuations) or "no odd primes"
        lines.append(f"s = {r.s}: c = {r.c}; {vals} {'ok' if r.ok else 'FAIL'}")
    lines.append(f"all ok: {ok}")
    _emit(args, {"ok": ok, "count": len(reports)}, lines)
    return EXIT_OK if ok else EXIT_ERROR


class _Parser(argparse.ArgumentParser):
    """Usage errors exit 1; code 2 stays reserved for mathematical findings."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_ERROR)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="eulerbrick",
        description="Exact-arithmetic experiments around the perfect Euler brick problem",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("pairs", help="enumerate the coprime pair universe")
    p.add_argument("--max", type=int, default=40)
    p.add_argument("--parity", action="store_true", help="restrict to opposite-parity pairs")
    p.add_argument("--count", action="store_true", help="print only the count")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_pairs)

    p = sub.add_parser("sweep", help="test f1*f2 for squares over all tuples")
    p.add_argument("--max", type=int, default=200)
    p.add_argument("--parity", action="store_true")
    p.add_argument("--both-factors", action="store_true",
                   help="require f1 and f2 to be squares separately")
    p.add_argument("--no-prefilter", action="store_true")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--checkpoint", metavar="PATH")
    p.add_argument("--out", metavar="PATH", help="JSONL findings output")
    p.add_argument("--stats", action="store_true", help="(default output)")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("blockers", help="smallest odd-valuation prime per tuple")
    p.add_argument("--max", type=int, default=39)
    p.add_argument("--parity", action="store_true")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--checkpoint", metavar="PATH")
    p.add_argument("--out", metavar="PATH", help="JSONL per-tuple reports")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_blockers)

    p = sub.add_parser("sieve", help="modular sieve for f-square candidates")
    p.add_argument("--s", type=parse_rational, action="append",
                   help="specialization p/q (repeatable; default: the five reference values)")
    p.add_argument("--height", type=int, default=1000)
    p.add_argument("--prime-bound", type=int, default=200)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_sieve)

    p = sub.add_parser("brick-check", help="exact diagonal tests for three edges")
    p.add_argument("e1", type=int)
    p.add_argument("e2", type=int)
    p.add_argument("e3", type=int)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_brick_check)

    p = sub.add_parser("curve-info", help="family coefficients and torsion at s")
    _add_s_arguments(p)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_curve_info)

    p = sub.add_parser("torsion", help="torsion subgroup at s")
    _add_s_arguments(p)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_torsion)

    p = sub.add_parser("kummer-verify", help="translation identities and parity tables")
    _add_s_arguments(p)
    p.add_argument("--trials", type=int, default=50, help="points per prime")
    p.add_argument("--prime-bound", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_kummer_verify)

    p = sub.add_parser("descent", help="harvest points and report descent classes")
    _add_s_arguments(p)
    p.add_argument("--height", type=int, default=10_000)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_descent)

    p = sub.add_parser("delta-generic", help="root-difference square classes")
    _add_s_arguments(p)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_delta_generic)

    p = sub.add_parser("c-primes", help="even-valuation check at primes of c")
    _add_s_arguments(p)
    p.add_argument("--trials", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_c_primes)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
