"""Torsion-translation behaviour of f.

Two independent verifications of the same structure: exact translation
identities f(P + T_i) in terms of f(P), sampled over many good primes, and
the abstract parity table of div(f(. + T4)) - div(f) on Z/4 x Z/2, whose
all-odd coefficients obstruct f(. + T4)/f(.) from being a square times a
constant.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from .curves import CurvePoint, EllipticFamily, f_value, torsion_subgroup

# ---------------------------------------------------------------------------
# The abstract torsion group Z/4 x Z/2

Element = tuple[int, int]

# display order: O, T4, 2T4, 3T4, then the coset by the order-2 generator
GROUP: tuple[Element, ...] = (
    (0, 0), (1, 0), (2, 0), (3, 0), (0, 1), (1, 1), (2, 1), (3, 1),
)


def g_add(g: Element, h: Element) -> Element:
    return ((g[0] + h[0]) % 4, (g[1] + h[1]) % 2)


def g_neg(g: Element) -> Element:
    return ((-g[0]) % 4, (-g[1]) % 2)


def g_order(g: Element) -> int:
    for k in (1, 2, 4):
        acc = ((g[0] * k) % 4, (g[1] * k) % 2)
        if acc == (0, 0):
            return k
    raise AssertionError


@dataclass(frozen=True)
class TorsionDivisor:
    coeffs: dict[Element, int]

    def degree(self) -> int:
        return sum(self.coeffs.values())

    def coefficient(self, g: Element) -> int:
        return self.coeffs.get(g, 0)

    def translate(self, t: Element) -> "TorsionDivisor":
        """Divisor of h(. + t) given the divisor of h: coefficients move to
        g - t (the zero of h at z appears for h(. + t) at z - t)."""
        return TorsionDivisor({g_add(g, g_neg(t)): c for g, c in self.coeffs.items()})


def embed_two_torsion(double_t4_label: int, swap: bool = False) -> dict[str, Element]:
    """Place the named points O, T1, T2, T3 inside Z/4 x Z/2 when the point
    T{double_t4_label} is 2*T4 = (2, 0); the other two 2-torsion points land
    on (0, 1) and (2, 1) (order controlled by ``swap``)."""
    if double_t4_label not in (1, 2, 3):
        raise ValueError("label must be 1, 2 or 3")
    rest = [i for i in (1, 2, 3) if i != double_t4_label]
    if swap:
        rest.reverse()
    placing = {f"T{double_t4_label}": (2, 0), f"T{rest[0]}": (0, 1), f"T{rest[1]}": (2, 1)}
    placing["O"] = (0, 0)
    return placing


def divisor_of_f_abstract(embedding: dict[str, Element]) -> TorsionDivisor:
    """div(f) = (T1) - (T2) - (T3) + (O) under the chosen embedding."""
    return TorsionDivisor(
        {
            embedding["T1"]: 1,
            embedding["T2"]: -1,
            embedding["T3"]: -1,
            embedding["O"]: 1,
        }
    )


def divisor_of_f(curve: EllipticFamily) -> tuple[TorsionDivisor, dict[str, Element]]:
    """The divisor of f on the abstract torsion group, using the labeling the
    curve actually realizes (which 2-torsion point is 2*T4)."""
    tors = torsion_subgroup(curve)
    if tors.structure != (4, 2):
        raise ValueError(f"torsion is Z/{tors.structure[0]} x Z/{tors.structure[1]}, not Z/4 x Z/2")
    embedding = embed_two_torsion(tors.double_t4_label)
    return divisor_of_f_abstract(embedding), embedding


@dataclass(frozen=True)
class ParityTable:
    """Net coefficients of div(f(. + t)) - div(f) over all 8 elements."""

    translation: Element
    net: dict[Element, int]
    row: tuple[int, ...]  # in GROUP display order
    all_odd: bool


def translation_table(divisor: TorsionDivisor, t: Element) -> ParityTable:
    translated = divisor.translate(t)
    net = {g: translated.coefficient(g) - divisor.coefficient(g) for g in GROUP}
    row = tuple(net[g] for g in GROUP)
    return ParityTable(t, net, row, all(c % 2 for c in row))


def parity_table(divisor: TorsionDivisor, t4: Element) -> ParityTable:
    """The table for an order-4 translate; these are the rows that must be
    all-odd."""
    if g_order(t4) != 4:
        raise ValueError(f"{t4} does not have order 4")
    return translation_table(divisor, t4)


def order4_elements() -> tuple[Element, ...]:
    return tuple(g for g in GROUP if g_order(g) == 4)


# ---------------------------------------------------------------------------
# Exact translation identities over finite fields


@dataclass
class PrimeIdentityReport:
    prime: int
    checked: int = 0
    excluded: int = 0
    failures: int = 0
    counterexample: tuple | None = None


@dataclass
class IdentityReport:
    s: Fraction
    trials_per_prime: int
    seed: int
    primes: list[PrimeIdentityReport] = field(default_factory=list)

    @property
    def checked(self) -> int:
        return sum(r.checked for r in self.primes)

    @property
    def excluded(self) -> int:
        return sum(r.excluded for r in self.primes)

    @property
    def failures(self) -> int:
        return sum(r.failures for r in self.primes)

    @property
    def passed(self) -> bool:
        return self.failures == 0 and self.checked > 0


def check_translation_identities_at(curve: EllipticFamily, P: CurvePoint) -> bool:
    """f(P+T1) = -f(P), f(P+T2) = -1/f(P), f(P+T3) = 1/f(P), exactly."""
    T1, T2, T3 = curve.two_torsion()
    fP = f_value(curve, P)
    return (
        f_value(curve, P + T1) == -fP
        and f_value(curve, P + T2) == -1 / fP
        and f_value(curve, P + T3) == 1 / fP
    )


def verify_translation_identities(
    s: Fraction,
    trials: int = 50,
    prime_bound: int = 200,
    prime_count: int | None = None,
    seed: int = 0,
) -> IdentityReport:
    """Sample random points over many good primes and check the three
    translation identities exactly; 2-torsion samples are excluded, not
    failures (f is undefined or zero there).

    Primes start at 11: below that the group mod p can consist of the four
    2-torsion points alone, leaving nothing to sample."""
    curve = EllipticFamily.at(s)
    report = IdentityReport(Fraction(s), trials, seed)
    primes = list(curve.good_primes(prime_bound, start=11))
    if prime_count is not None:
        primes = primes[:prime_count]
    if not primes:
        raise ValueError("no good primes below the bound")
    for p in primes:
        Ep = curve.reduction(p)
        rng = random.Random(f"{seed}:{p}:{s}")
        pr = PrimeIdentityReport(p)
        for _ in range(trials):
            P = Ep.random_point(rng)
            if not P.y:
                pr.excluded += 1
                continue
            if check_translation_identities_at(Ep, P):
                pr.checked += 1
            else:
                pr.failures += 1
                if pr.counterexample is None:
                    pr.counterexample = (p, P.x.v, P.y.v)
        report.primes.append(pr)
    return report
