"""Euclid-pair parametrization of the brick problem.

A pair (a, b) generates the triple U = a^2 - b^2, V = 2ab, W = a^2 + b^2.
Two pairs sharing an edge produce the quartic pair

    f1 = L1^2 + L3^2,   f2 = L2^2 + L3^2,

with legs L1 = 2(a^2-b^2)mn, L2 = 4abmn, L3 = (a^2+b^2)(m^2-n^2); the third
sum L1^2 + L2^2 = (2mn(a^2+b^2))^2 closes automatically.  A perfect brick is
equivalent to some tuple making f1 and f2 simultaneously square.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterator, NamedTuple

from .exact import is_perfect_square


@dataclass(frozen=True)
class EuclidPair:
    """Coprime pair a > b > 0.

    The pair generates a primitive triple exactly when a - b is odd
    (``odd_parity``); the sweep statistics also use the even-parity pairs,
    so coprimality is the only hard invariant here.
    """

    a: int
    b: int

    def __post_init__(self) -> None:
        if not (self.a > self.b > 0):
            raise ValueError(f"need a > b > 0, got ({self.a}, {self.b})")
        if gcd(self.a, self.b) != 1:
            raise ValueError(f"({self.a}, {self.b}) is not coprime")

    @property
    def odd_parity(self) -> bool:
        return (self.a - self.b) % 2 == 1

    @property
    def U(self) -> int:
        return self.a * self.a - self.b * self.b

    @property
    def V(self) -> int:
        return 2 * self.a * self.b

    @property
    def W(self) -> int:
        return self.a * self.a + self.b * self.b

    @property
    def s(self) -> Fraction:
        return Fraction(self.a, self.b)


def enumerate_euclid_pairs(limit: int, parity_filter: bool = True) -> Iterator[EuclidPair]:
    """All coprime pairs b < a <= limit in lexicographic order.

    With ``parity_filter`` only opposite-parity pairs (primitive-triple
    generators) are emitted; without it, every coprime pair.
    """
    if limit < 2:
        return
    for a in range(2, limit + 1):
        for b in range(1, a):
            if gcd(a, b) != 1:
                continue
            if parity_filter and (a - b) % 2 == 0:
                continue
            yield EuclidPair(a, b)


@dataclass(frozen=True)
class QuarticPair:
    first: EuclidPair
    second: EuclidPair
    legs: tuple[int, int, int]
    f1: int
    f2: int


def quartic_pair(p1: EuclidPair, p2: EuclidPair) -> QuarticPair:
    m, n = p2.a, p2.b
    L1 = 2 * p1.U * m * n
    L2 = 2 * p1.V * m * n
    L3 = p1.W * (m * m - n * n)
    return QuarticPair(p1, p2, (L1, L2, L3), L1 * L1 + L3 * L3, L2 * L2 + L3 * L3)


@dataclass(frozen=True)
class FamilyParams:
    """Normalized coefficients at s: c on the unit circle with kappa, and the
    octic coefficient A = 2 - 4c^2 (so A + 2 = 4 kappa^2)."""

    s: Fraction
    c: Fraction
    kappa: Fraction
    A: Fraction

    @property
    def degenerate(self) -> bool:
        return self.kappa == 0 or self.c == 0


def family_params(s: Fraction | int | str, allow_degenerate: bool = False) -> FamilyParams:
    s = Fraction(s)
    if s == 0:
        raise ValueError("s = 0 is singular")
    c = (s**4 - 6 * s**2 + 1) / (1 + s**2) ** 2
    kappa = 4 * s * (s**2 - 1) / (1 + s**2) ** 2
    if kappa == 0 and not allow_degenerate:
        raise ValueError(f"s = {s} is degenerate (kappa = 0)")
    return FamilyParams(s, c, kappa, 2 - 4 * c * c)


class FourFactors(NamedTuple):
    """The four positive-definite quadratic factor values at (s, lambda) and
    their pairing into the two normalized quartics."""

    phi: Fraction
    psi: Fraction
    factors: tuple[Fraction, Fraction, Fraction, Fraction]
    f1_normalized: Fraction
    f2_normalized: Fraction


def four_factor_eval(s: Fraction, lam: Fraction) -> FourFactors:
    s, lam = Fraction(s), Fraction(lam)
    if s == 0:
        raise ValueError("s = 0 is singular")
    phi = 4 * s / (1 + s**2)
    psi = 2 * (s**2 - 1) / (1 + s**2)
    assert phi * phi + psi * psi == 4
    l2 = lam * lam
    factors = (
        l2 + phi * lam + 1,
        l2 - phi * lam + 1,
        l2 + psi * lam + 1,
        l2 - psi * lam + 1,
    )
    f1n = factors[0] * factors[1]
    f2n = factors[2] * factors[3]
    # the pairing reproduces the normalized quartics lambda^4 +- 2c lambda^2 + 1
    c = (s**4 - 6 * s**2 + 1) / (1 + s**2) ** 2
    assert f1n == lam**4 + 2 * c * l2 + 1
    assert f2n == lam**4 - 2 * c * l2 + 1
    return FourFactors(phi, psi, factors, f1n, f2n)


class ConicPoint(NamedTuple):
    rho: Fraction
    Y: Fraction


def _pair_of(s: Fraction) -> tuple[int, int]:
    """The a > b >= 1 representative of s (c is invariant under s -> 1/s, -s)."""
    a, b = abs(s.numerator), s.denominator
    if a < b:
        a, b = b, a
    return a, b


def lambda_to_rho(s: Fraction, lam: Fraction) -> ConicPoint:
    """The conic parametrization rho = 4 U1 lambda / (W1 (1 - lambda^2)) with
    its companion Y; W1^2 rho^2 + 4 U1^2 = Y^2 exactly."""
    s, lam = Fraction(s), Fraction(lam)
    if lam == 1 or lam == -1:
        raise ValueError("lambda = +-1 is a pole of the parametrization")
    a, b = _pair_of(s)
    U1, W1 = a * a - b * b, a * a + b * b
    rho = Fraction(4 * U1, W1) * lam / (1 - lam * lam)
    Y = 2 * U1 * (1 + lam * lam) / (1 - lam * lam)
    assert W1 * W1 * rho * rho + 4 * U1 * U1 == Y * Y
    return ConicPoint(rho, Y)


class SquareCheck(NamedTuple):
    ok: bool
    root: int | None


@dataclass(frozen=True)
class BrickCandidate:
    edges: tuple[int, int, int]


@dataclass(frozen=True)
class BrickReport:
    edges: tuple[int, int, int]
    faces: tuple[SquareCheck, SquareCheck, SquareCheck]  # (e1,e2), (e2,e3), (e1,e3)
    space: SquareCheck
    is_euler: bool
    is_perfect: bool


def check_brick(e1: int, e2: int, e3: int) -> BrickReport:
    """Exact square tests on the three face diagonals and the space diagonal."""
    if min(e1, e2, e3) <= 0:
        raise ValueError("edges must be positive")
    faces = tuple(
        SquareCheck(*is_perfect_square(u * u + v * v))
        for u, v in ((e1, e2), (e2, e3), (e1, e3))
    )
    space = SquareCheck(*is_perfect_square(e1 * e1 + e2 * e2 + e3 * e3))
    is_euler = all(f.ok for f in faces)
    return BrickReport((e1, e2, e3), faces, space, is_euler, is_euler and space.ok)


def reconstruct_brick(
    s: Fraction, lam: Fraction, r: Fraction, x: Fraction
) -> BrickCandidate:
    """Rebuild integer edges from a solved quartic pair: r and x must be exact
    roots of lambda^4 + 2c lambda^2 + 1 and lambda^4 - 2c lambda^2 + 1.

    No such input is known for a non-degenerate family; the error paths are
    the reachable behavior.
    """
    s, lam, r, x = Fraction(s), Fraction(lam), Fraction(r), Fraction(x)
    params = family_params(s)  # kappa = 0 rejected here
    if lam in (0, 1, -1):
        raise ValueError("degenerate")
    c = params.c
    if r * r != lam**4 + 2 * c * lam**2 + 1 or x * x != lam**4 - 2 * c * lam**2 + 1:
        raise ValueError("not a quartic-pair solution")
    a, b = _pair_of(s)
    U1, V1, W1 = a * a - b * b, 2 * a * b, a * a + b * b
    rho = Fraction(4 * U1, W1) * lam / (1 - lam * lam)
    root = abs(2 * r / (1 - lam * lam))  # sqrt(rho^2 + 4), rational by hypothesis
    assert rho * rho + 4 == root * root
    t = (rho + root) / 2  # positive root of t - 1/t = rho
    if t < 1:
        t = 1 / t
    m, n = t.numerator, t.denominator
    U2, V2 = m * m - n * n, 2 * m * n
    candidate = BrickCandidate((U1 * U2, V1 * U2, U1 * V2))
    report = check_brick(*candidate.edges)
    assert report.is_perfect, "reconstructed edges failed the exact brick checks"
    return candidate
