#!/usr/bin/env python3
"""Benchmark the compiled sweep kernel against the pure-Python fallback.

Both kernels scan the same first-pair/second-pair tables and must produce
identical survivor counts and hits; the table prints throughput for the
product mode and the both-factors mode.

Usage: python3 benchmarks/bench_sweep.py [--max N] [--repeat R]
"""

import argparse
import time

from eulerbrick import _sweeppy
from eulerbrick.search import pair_coefficients, second_tables, sweep_pairs
from eulerbrick.sweepcore import FILTER_MODULUS, square_residue_table

try:
    from eulerbrick import _sweepcore
except ImportError:
    _sweepcore = None


def run_backend(kernel, pairs, tables, qr, both):
    survivors = 0
    hits = 0
    t0 = time.perf_counter()
    for a, b in pairs:
        cu, cv, cw = pair_coefficients(a, b)
        s, h = kernel.scan_pair(
            cu, cv, cw, tables.g2m, tables.h2m, tables.g, tables.h,
            qr, FILTER_MODULUS, both, True,
        )
        survivors += s
        hits += len(h)
    return time.perf_counter() - t0, survivors, hits


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--max", type=int, default=150)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    pairs = sweep_pairs(args.max, parity=False)
    tables = second_tables(pairs)
    qr = square_residue_table()
    tuples = len(pairs) ** 2
    print(f"max = {args.max}: {len(pairs)} pairs, {tuples:,} tuples per pass\n")

    backends = [("python (numpy)", _sweeppy)]
    if _sweepcore is not None:
        backends.insert(0, ("cython", _sweepcore))
    else:
        print("compiled kernel not built; benchmarking the fallback only\n")

    for both in (False, True):
        mode = "both-factors" if both else "product"
        print(f"mode: {mode}")
        reference = None
        for name, kernel in backends:
            best = None
            for _ in range(args.repeat):
                dt, survivors, hits = run_backend(kernel, pairs, tables, qr, both)
                best = dt if best is None else min(best, dt)
            if reference is None:
                reference = (survivors, hits)
            elif reference != (survivors, hits):
                raise SystemExit(f"backend mismatch: {reference} vs {(survivors, hits)}")
            rate = tuples / best
            print(
                f"  {name:<15} {best:8.2f} s   {rate/1e6:8.1f} M tuples/s"
                f"   survivors {survivors:,}   hits {hits}"
            )
        print()


if __name__ == "__main__":
    main()
