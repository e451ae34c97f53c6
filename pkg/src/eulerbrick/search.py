"""The computational experiments: the quartic-pair sweep, blocker-prime
statistics, and the modular sieve for square values of f.

The sweep iterates tuples of two coprime pairs and tests f1*f2 (or, with
``both_factors``, each factor) for squareness: a hit would be a perfect-brick
candidate and is treated as a finding, never discarded.  A "blocker" for a
tuple is the smallest prime with odd valuation in f1*f2; its existence
certifies the tuple, and its residue class mod 4 feeds the histogram.
"""

from __future__ import annotations

import json
import os
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, isqrt

import numpy as np

from .exact import (
    SMALL_PRIMES,
    GaussianInt,
    GaussianValuation,
    factorize,
    gaussian_valuations,
    int_valuation,
    is_perfect_square,
    is_prime,
)
from .fields import legendre, sqrt_mod
from .param import EuclidPair, family_params, quartic_pair
from .sweepcore import FILTER_MODULUS, scan_pair, square_residue_table

# The five specializations singled out for the f-square sieve (reciprocal
# convention, s < 1).
DEFAULT_SIEVE_SPECIALIZATIONS = (
    Fraction(18, 41),
    Fraction(18, 47),
    Fraction(23, 59),
    Fraction(23, 64),
    Fraction(29, 65),
)

BLOCKER_CLASSES = ("2", "1mod4", "3mod4")


def blocker_class(p: int) -> str:
    if p == 2:
        return "2"
    return "1mod4" if p % 4 == 1 else "3mod4"


# ---------------------------------------------------------------------------
# Tuple universe


def sweep_pairs(max_param: int, parity: bool) -> list[tuple[int, int]]:
    """First/second pair universe of the sweep: coprime (a, b), b < a <= max,
    lexicographic; with ``parity`` restricted to opposite-parity pairs."""
    return [
        (a, b)
        for a in range(2, max_param + 1)
        for b in range(1, a)
        if gcd(a, b) == 1 and (not parity or (a - b) % 2 == 1)
    ]


@dataclass(frozen=True)
class SecondTables:
    """Per-second-pair data: exact g = mn and h = m^2 - n^2 plus their
    squared residues mod the filter modulus."""

    g: np.ndarray  # int64
    h: np.ndarray  # int64
    g2m: np.ndarray  # uint64
    h2m: np.ndarray  # uint64


def second_tables(pairs: list[tuple[int, int]], modulus: int = FILTER_MODULUS) -> SecondTables:
    g = np.array([m * n for (m, n) in pairs], dtype=np.int64)
    h = np.array([m * m - n * n for (m, n) in pairs], dtype=np.int64)
    g2m = (g.astype(np.uint64) ** 2) % modulus
    h2m = (h.astype(np.uint64) ** 2) % modulus
    return SecondTables(g, h, g2m, h2m)


def pair_coefficients(a: int, b: int) -> tuple[int, int, int]:
    """(4*U1^2, 4*V1^2, W1^2) for the first pair."""
    U1 = a * a - b * b
    V1 = 2 * a * b
    W1 = a * a + b * b
    return 4 * U1 * U1, 4 * V1 * V1, W1 * W1


def tuple_quartic_values(a: int, b: int, m: int, n: int) -> tuple[int, int]:
    cu, cv, cw = pair_coefficients(a, b)
    g = m * n
    h = m * m - n * n
    return cu * g * g + cw * h * h, cv * g * g + cw * h * h


# ---------------------------------------------------------------------------
# Stats, config, checkpoints


@dataclass
class SweepStats:
    tuples: int = 0
    squares: int = 0
    prefilter_survivors: int = 0
    blocker_classes: Counter = field(default_factory=Counter)
    blocker_primes: Counter = field(default_factory=Counter)

    def merge(self, other: "SweepStats") -> None:
        self.tuples += other.tuples
        self.squares += other.squares
        self.prefilter_survivors += other.prefilter_survivors
        self.blocker_classes.update(other.blocker_classes)
        self.blocker_primes.update(other.blocker_primes)

    def to_json(self) -> dict:
        return {
            "tuples": str(self.tuples),
            "squares": str(self.squares),
            "prefilter_survivors": str(self.prefilter_survivors),
            "blocker_classes": {k: str(v) for k, v in sorted(self.blocker_classes.items())},
            "blocker_primes": {str(k): str(v) for k, v in sorted(self.blocker_primes.items())},
        }

    @classmethod
    def from_json(cls, data: dict) -> "SweepStats":
        return cls(
            tuples=int(data["tuples"]),
            squares=int(data["squares"]),
            prefilter_survivors=int(data["prefilter_survivors"]),
            blocker_classes=Counter({k: int(v) for k, v in data.get("blocker_classes", {}).items()}),
            blocker_primes=Counter({int(k): int(v) for k, v in data.get("blocker_primes", {}).items()}),
        )


@dataclass(frozen=True)
class SweepConfig:
    max_param: int = 200
    parity: bool = False  # the reference statistics use the coprime-only universe
    both_factors: bool = False
    prefilter: bool = True
    jobs: int = 1
    checkpoint_path: str | None = None
    out_path: str | None = None
    halt_on_hit: bool = True
    stop_after: int | None = None  # first pairs to process this call (testing aid)


@dataclass
class Finding:
    a: int
    b: int
    m: int
    n: int
    f1: int
    f2: int

    def record(self) -> dict:
        return {
            "a": self.a,
            "b": self.b,
            "m": self.m,
            "n": self.n,
            "f1": str(self.f1),
            "f2": str(self.f2),
            "square": True,
            "blocker": None,
            "blocker_class": None,
        }


@dataclass
class SweepResult:
    stats: SweepStats
    findings: list[Finding]
    completed: bool


def _write_checkpoint(path: str, cursor: tuple[int, int] | None, stats: SweepStats) -> None:
    payload = {"cursor": list(cursor) if cursor else None, "stats": stats.to_json()}
    tmp = path + ".tmp"
    with open(tmp, "w") as fh:
        json.dump(payload, fh)
    os.replace(tmp, path)


def _read_checkpoint(path: str) -> tuple[tuple[int, int] | None, SweepStats]:
    with open(path) as fh:
        payload = json.load(fh)
    cursor = tuple(payload["cursor"]) if payload["cursor"] else None
    return cursor, SweepStats.from_json(payload["stats"])


# ---------------------------------------------------------------------------
# Sweep driver

_WORKER: dict = {}


def _init_worker(pairs, tables, qr, modulus, both, prefilter, mode):
    _WORKER.update(
        pairs=pairs, tables=tables, qr=qr, modulus=modulus,
        both=both, prefilter=prefilter, mode=mode,
    )


def _scan_one(index: int) -> tuple[int, int, list[Finding]]:
    """(tuples, survivors, findings) for first pair ``index``."""
    a, b = _WORKER["pairs"][index]
    t: SecondTables = _WORKER["tables"]
    cu, cv, cw = pair_coefficients(a, b)
    survivors, hits = scan_pair(
        cu, cv, cw, t.g2m, t.h2m, t.g, t.h,
        _WORKER["qr"], _WORKER["modulus"], _WORKER["both"], _WORKER["prefilter"],
    )
    findings = []
    for i in hits:
        m, n = _WORKER["pairs"][i]
        f1, f2 = tuple_quartic_values(a, b, m, n)
        value = (f1, f2) if _WORKER["both"] else (f1 * f2,)
        assert all(is_perfect_square(v)[0] for v in value), "kernel hit failed the exact recheck"
        findings.append(Finding(a, b, m, n, f1, f2))
    return len(t.g), survivors, findings


def _blocker_one(index: int) -> tuple[int, Counter, Counter, list[dict], list[Finding]]:
    a, b = _WORKER["pairs"][index]
    pairs = _WORKER["pairs"]
    want_reports = _WORKER["mode"] == "reports"
    classes: Counter = Counter()
    primes: Counter = Counter()
    reports: list[dict] = []
    findings: list[Finding] = []
    cu, cv, cw = pair_coefficients(a, b)
    for m, n in pairs:
        g = m * n
        h = m * m - n * n
        f1 = cu * g * g + cw * h * h
        f2 = cv * g * g + cw * h * h
        p, _v = smallest_blocker(f1, f2)
        if p is None:
            findings.append(Finding(a, b, m, n, f1, f2))
            if want_reports:
                reports.append(Finding(a, b, m, n, f1, f2).record())
            continue
        cls = blocker_class(p)
        classes[cls] += 1
        primes[p] += 1
        if want_reports:
            reports.append(
                {
                    "a": a, "b": b, "m": m, "n": n,
                    "f1": str(f1), "f2": str(f2),
                    "square": False, "blocker": p, "blocker_class": cls,
                }
            )
    return len(pairs), classes, primes, reports, findings


def smallest_blocker(f1: int, f2: int) -> tuple[int | None, int]:
    """(smallest prime p with v_p(f1*f2) odd, that valuation); (None, 0) when
    f1*f2 is a perfect square.  Ascending trial division settles almost every
    tuple; a surviving cofactor is either square, prime, or gets factored."""
    N = f1 * f2
    for p in SMALL_PRIMES:
        if N % p == 0:
            v = 0
            while N % p == 0:
                N //= p
                v += 1
            if v % 2 == 1:
                return p, v
        if N == 1:
            return None, 0
        if p * p > N:
            return N, 1
    if N == 1:
        return None, 0
    ok, _ = is_perfect_square(N)
    if ok:
        return None, 0
    odd = [(p, e) for p, e in factorize(N) if e % 2 == 1]
    assert odd, "non-square cofactor must carry an odd exponent"
    return odd[0]


def _run_indexed(
    config: SweepConfig,
    pairs: list[tuple[int, int]],
    one,
    init_args: tuple,
    on_pair_done,
) -> bool:
    """Drive ``one(index)`` over every first-pair index, honouring resume,
    jobs, stop_after and halt-on-hit; returns True when the whole range ran."""
    start = 0
    if config.checkpoint_path and os.path.exists(config.checkpoint_path):
        cursor, _ = _read_checkpoint(config.checkpoint_path)
        if cursor is not None:
            start = pairs.index(tuple(cursor)) + 1
    stop = len(pairs)
    if config.stop_after is not None:
        stop = min(stop, start + config.stop_after)
    indices = range(start, stop)
    if not indices:
        return start >= len(pairs)
    halted = False
    if config.jobs <= 1:
        _init_worker(*init_args)
        for i in indices:
            if on_pair_done(i, one(i)):
                halted = True
                break
    else:
        with ProcessPoolExecutor(
            max_workers=config.jobs, initializer=_init_worker, initargs=init_args
        ) as pool:
            for i, result in zip(indices, pool.map(one, indices, chunksize=16)):
                if on_pair_done(i, result):
                    halted = True
                    break
    return not halted and stop == len(pairs)


def sweep(config: SweepConfig) -> SweepResult:
    """Run the square sweep over the configured tuple universe."""
    pairs = sweep_pairs(config.max_param, config.parity)
    stats = SweepStats()
    if config.checkpoint_path and os.path.exists(config.checkpoint_path):
        _, stats = _read_checkpoint(config.checkpoint_path)
    tables = second_tables(pairs)
    qr = square_residue_table()
    findings: list[Finding] = []
    out = open(config.out_path, "a") if config.out_path else None

    def on_done(i, result):
        tuples, survivors, hits = result
        stats.tuples += tuples
        stats.prefilter_survivors += survivors
        stats.squares += len(hits)
        findings.extend(hits)
        for hit in hits:
            if out:
                out.write(json.dumps(hit.record()) + "\n")
        if config.checkpoint_path:
            _write_checkpoint(config.checkpoint_path, pairs[i], stats)
        return bool(hits) and config.halt_on_hit

    init_args = (pairs, tables, qr, FILTER_MODULUS, config.both_factors, config.prefilter, "sweep")
    completed = _run_indexed(config, pairs, _scan_one, init_args, on_done)
    if out:
        out.close()
    return SweepResult(stats, findings, completed)


def blocker_analysis(config: SweepConfig) -> SweepResult:
    """Factor every tuple's f1*f2 far enough to find its smallest blocker;
    aggregate the mod-4 histogram (and stream per-tuple records to out_path)."""
    pairs = sweep_pairs(config.max_param, config.parity)
    stats = SweepStats()
    if config.checkpoint_path and os.path.exists(config.checkpoint_path):
        _, stats = _read_checkpoint(config.checkpoint_path)
    findings: list[Finding] = []
    mode = "reports" if config.out_path else "histogram"
    out = open(config.out_path, "a") if config.out_path else None

    def on_done(i, result):
        tuples, classes, primes, reports, hits = result
        stats.tuples += tuples
        stats.blocker_classes.update(classes)
        stats.blocker_primes.update(primes)
        stats.squares += len(hits)
        findings.extend(hits)
        if out:
            for record in reports:
                out.write(json.dumps(record) + "\n")
        if config.checkpoint_path:
            _write_checkpoint(config.checkpoint_path, pairs[i], stats)
        return bool(hits) and config.halt_on_hit

    init_args = (pairs, None, None, FILTER_MODULUS, config.both_factors, config.prefilter, mode)
    completed = _run_indexed(config, pairs, _blocker_one, init_args, on_done)
    if out:
        out.close()
    return SweepResult(stats, findings, completed)


# ---------------------------------------------------------------------------
# Gaussian structure of a tuple's blocker


@dataclass(frozen=True)
class GaussianBlockerReport:
    pair_tuple: tuple[int, int, int, int]
    f1: int
    f2: int
    blocker: int | None
    blocker_class: str | None
    z1: GaussianInt
    z2: GaussianInt
    valuations: tuple[GaussianValuation, ...]  # at the blocker, for z1 and z2
    product_valuation: int  # v_p(f1*f2), reconstructed from the Gaussian data


def gaussian_blocker_check(a: int, b: int, m: int, n: int) -> GaussianBlockerReport:
    """Express the blocker's odd valuation through the Gaussian integers
    z_i = L_i + i L_3 whose norms are f1 and f2.  Blockers are never
    3 mod 4: inert primes divide norms to even powers."""
    qp = quartic_pair(EuclidPair(a, b), EuclidPair(m, n))
    L1, L2, L3 = qp.legs
    z1 = GaussianInt(L1, L3)
    z2 = GaussianInt(L2, L3)
    p, _v = smallest_blocker(qp.f1, qp.f2)
    if p is None:
        return GaussianBlockerReport((a, b, m, n), qp.f1, qp.f2, None, None, z1, z2, (), 0)
    assert p == 2 or p % 4 == 1, f"blocker {p} = 3 (mod 4) contradicts the norm structure"
    v1 = gaussian_valuations(z1, p)
    v2 = gaussian_valuations(z2, p)
    total = v1.norm_valuation + v2.norm_valuation
    assert total == int_valuation(qp.f1 * qp.f2, p)
    assert total % 2 == 1
    return GaussianBlockerReport(
        (a, b, m, n), qp.f1, qp.f2, p, blocker_class(p), z1, z2, (v1, v2), total
    )


# ---------------------------------------------------------------------------
# Modular sieve for f-square candidates


@dataclass(frozen=True)
class SieveReport:
    s: Fraction
    height: int
    prime_bound: int
    primes: tuple[int, ...]
    candidates: int
    excluded_x: tuple[Fraction, ...]
    survivors: tuple[tuple[int, int], ...]  # (u, w) with x = u / w^2


def _survive_table(p: int, A_mod: int) -> np.ndarray:
    """survive[x] = 1 iff a rational point reducing to this x mod p could
    still have f a square: the cubic must be a square mod p, and for split p
    the f-value itself (either y-branch) must be a square."""
    table = np.zeros(p, dtype=np.uint8)
    for x in range(p):
        cubic = (x + A_mod) * (x * x - 4) % p
        if cubic == 0:
            table[x] = 1  # reduces onto 2-torsion: inconclusive
            continue
        if legendre(cubic, p) == -1:
            continue
        if p % 4 == 3:
            table[x] = 1  # -1 is a non-residue: one y-branch always works
            continue
        y = sqrt_mod(cubic, p)
        f = 2 * y * pow(x * x - 4, p - 2, p) % p
        table[x] = 1 if legendre(f, p) == 1 else 0
    return table


def modular_sieve(s: Fraction, height: int = 1000, prime_bound: int = 200) -> SieveReport:
    """Eliminate candidate x = u/w^2 (|u| <= height * w^2, w <= sqrt(height),
    coprime) by the mod-p square conditions at every good odd prime below the
    bound.  The x-values where f is identically 0, +-1 or undefined (the
    2-torsion roots, the poles, and 2 +- 4*kappa) are excluded exactly."""
    params = family_params(Fraction(s))
    A = params.A
    specials = (
        Fraction(2),
        Fraction(-2),
        -A,
        2 + 4 * params.kappa,
        2 - 4 * params.kappa,
    )
    primes = []
    tables = {}
    for p in range(3, prime_bound):
        if not is_prime(p):
            continue
        if A.denominator % p == 0:
            continue
        a_mod = A.numerator * pow(A.denominator, p - 2, p) % p
        if (a_mod - 2) % p == 0 or (a_mod + 2) % p == 0:
            continue
        primes.append(p)
        tables[p] = _survive_table(p, a_mod)

    candidates = 0
    survivors: list[tuple[int, int]] = []
    for w in range(1, isqrt(height) + 1):
        H = height * w * w
        u = np.arange(-H, H + 1, dtype=np.int64)
        u = u[np.gcd(u, w) == 1]
        w2 = w * w
        for sp in specials:
            if sp.denominator == w2:
                u = u[u != sp.numerator]
        candidates += len(u)
        for p in primes:
            if not len(u):
                break
            if w % p == 0:
                continue  # candidate reduces to infinity: inconclusive at p
            inv = pow(w2, p - 2, p)
            u = u[tables[p][(u * inv) % p] == 1]
        survivors.extend((int(v), w) for v in u)
    return SieveReport(
        params.s, height, prime_bound, tuple(primes), candidates,
        tuple(sorted(specials)), tuple(survivors),
    )
