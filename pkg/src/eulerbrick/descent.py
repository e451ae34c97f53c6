"""Square-class diagnostics from 2-descent on the family.

The class of a point is the triple of squarefree parts of x - r_i at the
three roots; the product is always a square.  On top of that: the generic
root-difference classes, the delta_3 case analysis of f's square class, and
the even-valuation check at odd primes of the numerator of c.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt

from .curves import CurvePoint, EllipticFamily, f_value, torsion_subgroup
from .exact import (
    factorize,
    is_perfect_square,
    rational_valuation,
    squarefree_part,
)
from .param import family_params


@dataclass(frozen=True)
class DescentClass:
    delta1: int
    delta2: int
    delta3: int

    def __post_init__(self) -> None:
        ok, _ = is_perfect_square(self.delta1 * self.delta2 * self.delta3)
        if not ok:
            raise ValueError(f"{self} does not multiply to a square")

    def __iter__(self):
        return iter((self.delta1, self.delta2, self.delta3))


def descent_class(curve: EllipticFamily, P: CurvePoint) -> DescentClass:
    """(delta_1, delta_2, delta_3): squarefree parts of x - r_i as rational
    square classes; needs y != 0 so that no coordinate vanishes."""
    if curve.field_prime is not None:
        raise ValueError("descent classes live over the rationals")
    if P.is_infinity or not P.y:
        raise ValueError("descent class needs a point outside the 2-torsion")
    x = P.x
    r1, r2, r3 = curve.roots
    return DescentClass(
        squarefree_part(x - r1), squarefree_part(x - r2), squarefree_part(x - r3)
    )


@dataclass(frozen=True)
class DeltaGenericReport:
    s: Fraction
    delta1_class: int  # squarefree part of (r1-r2)(r1-r3); -1 generically
    delta2_class: int  # squarefree part of (r2-r1)(r2-r3); +1 generically
    ok: bool


def check_delta_generic(s: Fraction) -> DeltaGenericReport:
    params = family_params(Fraction(s))
    A = params.A
    d1 = squarefree_part((-A - 2) * (-A + 2))
    d2 = squarefree_part((2 + A) * 4)
    return DeltaGenericReport(params.s, d1, d2, d1 == -1 and d2 == 1)


@dataclass(frozen=True)
class D3Report:
    x: Fraction
    descent: DescentClass
    is_torsion: bool
    f_class: int  # squarefree part of f(P)
    case_a_applies: bool  # delta_3 = 1
    case_a_ok: bool | None  # None when exempt (torsion) or not applicable
    case_b: tuple[tuple[int, bool, bool], ...]  # (p, p | delta1, p | delta2)
    case_b_ok: bool
    d2d3_parity: tuple[tuple[int, int], ...]  # (p, v_p(f)) for p | gcd-support of d2, d3
    residual_class: bool  # delta_3 != 1 with every odd p | delta_3 dividing delta_1 only


def d3_obstruction(
    curve: EllipticFamily, P: CurvePoint, torsion_points: tuple[CurvePoint, ...] | None = None
) -> D3Report:
    """Case analysis on delta_3 for a rational point with y != 0.

    delta_3 = 1 forces f's square class to 2 for non-torsion points (torsion
    points are reported but exempt); every odd prime of delta_3 must divide
    delta_1 or delta_2; when it divides both delta_2 and delta_3 the parity
    of v_p(f) is recorded as an observation.
    """
    delta = descent_class(curve, P)
    if torsion_points is None:
        torsion_points = torsion_subgroup(curve).points
    is_torsion = P in torsion_points
    f = f_value(curve, P)
    f_class = squarefree_part(f)
    case_a = delta.delta3 == 1
    case_a_ok: bool | None = None
    if case_a and not is_torsion:
        case_a_ok = f_class == 2
    case_b = []
    parities = []
    for p, _ in factorize(abs(delta.delta3)):
        if p == 2:
            continue
        in1 = delta.delta1 % p == 0
        in2 = delta.delta2 % p == 0
        case_b.append((p, in1, in2))
        if in2:
            parities.append((p, rational_valuation(f, p)))
    case_b_ok = all(in1 or in2 for _, in1, in2 in case_b)
    residual = (
        delta.delta3 != 1
        and bool(case_b)
        and all(in1 and not in2 for _, in1, in2 in case_b)
    )
    return D3Report(
        P.x, delta, is_torsion, f_class, case_a, case_a_ok,
        tuple(case_b), case_b_ok, tuple(parities), residual,
    )


@dataclass(frozen=True)
class CPrimesReport:
    s: Fraction
    c: Fraction
    numerator_primes: tuple[int, ...]  # odd primes of the numerator of c
    valuations: tuple[tuple[int, int], ...]  # (p, v_p(2s(s^2-1)))
    ok: bool  # all valuations even


def check_c_primes(s: Fraction) -> CPrimesReport:
    """At every odd prime p of the numerator of c, the square class
    2s(s^2 - 1) of the relevant root-difference product has even valuation,
    so p imposes no local descent condition on the eta-quotient."""
    params = family_params(Fraction(s))
    c = params.c
    if c == 0:
        raise ValueError("c = 0")
    odd_primes = tuple(p for p, _ in factorize(abs(c.numerator)) if p != 2)
    target = 2 * params.s * (params.s**2 - 1)
    vals = tuple((p, rational_valuation(target, p)) for p in odd_primes)
    return CPrimesReport(params.s, c, odd_primes, vals, all(v % 2 == 0 for _, v in vals))


def eta_quotient_invariants(s: Fraction) -> tuple[Fraction, Fraction]:
    """alpha = 2(s^2-1)/(1+s^2) and beta = 4s/(1+s^2); the eta-model quartic
    has roots +-alpha, +-beta and 4*alpha*beta = 32 s (s^2-1)/(1+s^2)^2."""
    s = Fraction(s)
    return 2 * (s**2 - 1) / (1 + s**2), 4 * s / (1 + s**2)


# ---------------------------------------------------------------------------
# Point harvest


def harvest_points(
    curve: EllipticFamily,
    height: int = 10_000,
    include_torsion: bool = True,
    torsion_points: tuple[CurvePoint, ...] | None = None,
) -> list[CurvePoint]:
    """Rational points with y != 0 found by a naive box search over
    x = u / w^2, |u| <= height, w <= sqrt(height), plus (optionally) the
    torsion points outside the 2-torsion."""
    if curve.field_prime is not None:
        raise ValueError("harvest runs over the rationals")
    A = curve.A
    pa, qa = A.numerator, A.denominator
    found: dict[tuple, CurvePoint] = {}
    if include_torsion:
        if torsion_points is None:
            torsion_points = torsion_subgroup(curve).points
        for T in torsion_points:
            if not T.is_infinity and T.y:
                found[(T.x, T.y)] = T
    for w in range(1, isqrt(height) + 1):
        w2 = w * w
        w4 = w2 * w2
        for u in range(-height, height + 1):
            if gcd(u, w) != 1:
                continue
            # rhs(u/w^2) = (u qa + pa w^2)(u^2 - 4 w^4) / (qa w^6); square
            # test on the numerator-denominator product
            t = (u * qa + pa * w2) * (u * u - 4 * w4) * qa
            if t <= 0:
                continue
            ok, _ = is_perfect_square(t)
            if not ok:
                continue
            x = Fraction(u, w2)
            y2 = curve.rhs(x)
            ok_n, rn = is_perfect_square(y2.numerator)
            ok_d, rd = is_perfect_square(y2.denominator)
            assert ok_n and ok_d
            y = Fraction(rn, rd)
            P = curve.point(x, y)
            found.setdefault((x, y), P)
    return sorted(found.values(), key=lambda P: (P.x, P.y))


# ---------------------------------------------------------------------------
# Polynomial coprimality witnesses (exact gcds over Q[t])


def _poly_mod(f: list[Fraction], g: list[Fraction]) -> list[Fraction]:
    f = f[:]
    while len(f) >= len(g) and any(f):
        coef = f[0] / g[0]
        for i in range(len(g)):
            f[i] -= coef * g[i]
        f = f[1:]
    while f and f[0] == 0:
        f = f[1:]
    return f


def poly_gcd(f: list[Fraction], g: list[Fraction]) -> list[Fraction]:
    """Monic gcd of two polynomials (leading coefficient first)."""
    f = [Fraction(c) for c in f]
    g = [Fraction(c) for c in g]
    while g:
        f, g = g, _poly_mod(f, g)
    if not f:
        return []
    lead = f[0]
    return [c / lead for c in f]


def quartic_pair_coprime(c: Fraction) -> bool:
    """gcd(t^4 + 2c t^2 + 1, t^4 - 2c t^2 + 1) = 1 over Q for c != 0."""
    c = Fraction(c)
    one = Fraction(1)
    f = [one, Fraction(0), 2 * c, Fraction(0), one]
    g = [one, Fraction(0), -2 * c, Fraction(0), one]
    return poly_gcd(f, g) == [one]


def c_numerator_coprime_to_target() -> bool:
    """gcd(t^2 +- 2t - 1, t(t-1)(t+1)) = 1 over Q: the numerator factors of c
    share no root with the square class 2s(s^2 - 1)."""
    one = Fraction(1)
    cubic = [one, Fraction(0), Fraction(-1), Fraction(0)]  # t^3 - t
    for sign in (1, -1):
        quad = [one, Fraction(2 * sign), Fraction(-1)]
        if poly_gcd(quad, cubic) != [one]:
            return False
    return True
