"""The elliptic family y^2 = (x + A)(x - 2)(x + 2) with exact arithmetic.

One group-law implementation serves both coordinate domains: Fraction for
rational points and Fp for reductions.  On top of it: halving (rational
preimages of doubling), the torsion subgroup, the bridge functions
M = 4(x+A)/(x^2-4) and f = 2y/((x-2)(x+2)), square-root lifts to the octic
curve w^2 = t^8 + A t^4 + 1, and its three quotient models.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterator

from .exact import factorize, is_perfect_square, is_prime, squarefree_part
from .fields import Fp
from .param import FamilyParams, family_params


class DegenerateFamilyError(ValueError):
    """A = +-2 collapses two of the three roots; every curve operation refuses."""


def _fraction_sqrt(q: Fraction) -> Fraction | None:
    if q < 0:
        return None
    ok_n, rn = is_perfect_square(q.numerator)
    if not ok_n:
        return None
    ok_d, rd = is_perfect_square(q.denominator)
    if not ok_d:
        return None
    return Fraction(rn, rd)


class EllipticFamily:
    """y^2 = (x + A)(x - 2)(x + 2) over Q (A a Fraction) or F_p (A an Fp)."""

    def __init__(self, A):
        if isinstance(A, int):
            A = Fraction(A)
        if A == 2 or A == -2:
            raise DegenerateFamilyError(f"A = {A} has a repeated root")
        self.A = A
        self.field_prime = A.p if isinstance(A, Fp) else None

    @classmethod
    def from_params(cls, params: FamilyParams) -> "EllipticFamily":
        return cls(params.A)

    @classmethod
    def at(cls, s) -> "EllipticFamily":
        return cls.from_params(family_params(Fraction(s)))

    @property
    def roots(self):
        two = self._coerce(2)
        return (-self.A, two, -two)

    def _coerce(self, v: int):
        return Fp(self.field_prime, v) if self.field_prime else Fraction(v)

    def rhs(self, x):
        return (x + self.A) * (x - 2) * (x + 2)

    def __eq__(self, other):
        return (
            isinstance(other, EllipticFamily)
            and self.A == other.A
            and self.field_prime == other.field_prime
        )

    def __repr__(self):
        where = f"F_{self.field_prime}" if self.field_prime else "Q"
        return f"y^2 = (x + {self.A})(x - 2)(x + 2) over {where}"

    def infinity(self) -> "CurvePoint":
        return CurvePoint(self, None, None, _check=False)

    def point(self, x, y) -> "CurvePoint":
        if self.field_prime and isinstance(x, int):
            x, y = Fp(self.field_prime, x), Fp(self.field_prime, y)
        return CurvePoint(self, x, y)

    def two_torsion(self) -> tuple["CurvePoint", "CurvePoint", "CurvePoint"]:
        zero = self._coerce(0)
        return tuple(CurvePoint(self, r, zero, _check=False) for r in self.roots)

    def reduction(self, p: int) -> "EllipticFamily":
        """The curve over F_p; only good odd primes are accepted."""
        if self.field_prime is not None:
            raise ValueError("already over a finite field")
        if not is_prime(p) or p == 2:
            raise ValueError(f"{p} is not an odd prime")
        if self.A.denominator % p == 0:
            raise ValueError(f"bad reduction at {p} (denominator)")
        a = self.A.numerator * pow(self.A.denominator, p - 2, p) % p
        if (a - 2) % p == 0 or (a + 2) % p == 0:
            raise ValueError(f"bad reduction at {p} (repeated root)")
        return EllipticFamily(Fp(p, a))

    def good_primes(self, bound: int, start: int = 3) -> Iterator[int]:
        for p in range(start, bound):
            if p % 2 and is_prime(p):
                try:
                    self.reduction(p)
                except ValueError:
                    continue
                yield p

    def random_point(self, rng: random.Random) -> "CurvePoint":
        """Uniform-ish affine point over F_p (draws x until the cubic is a
        nonzero square, random y branch)."""
        p = self.field_prime
        if p is None:
            raise ValueError("random points need a finite field")
        for _ in range(16 * p):
            x = Fp(p, rng.randrange(p))
            w = self.rhs(x)
            if not w:
                return CurvePoint(self, x, w, _check=False)  # 2-torsion
            if w.is_square():
                y = w.sqrt()
                if rng.randrange(2):
                    y = -y
                return CurvePoint(self, x, y, _check=False)
        raise ArithmeticError(f"no affine point found mod {p}")


class CurvePoint:
    __slots__ = ("curve", "x", "y")

    def __init__(self, curve: EllipticFamily, x, y, _check: bool = True):
        self.curve = curve
        self.x = x
        self.y = y
        if _check and x is not None and y * y != curve.rhs(x):
            raise ValueError(f"({x}, {y}) is not on {curve}")

    @property
    def is_infinity(self) -> bool:
        return self.x is None

    def __neg__(self) -> "CurvePoint":
        if self.is_infinity:
            return self
        return CurvePoint(self.curve, self.x, -self.y, _check=False)

    def __add__(self, other: "CurvePoint") -> "CurvePoint":
        if not isinstance(other, CurvePoint):
            return NotImplemented
        if self.curve != other.curve:
            raise ValueError("points on different curves")
        if self.is_infinity:
            return other
        if other.is_infinity:
            return self
        A = self.curve.A
        x1, y1, x2, y2 = self.x, self.y, other.x, other.y
        if x1 == x2:
            if y1 != y2 or not y1:
                return self.curve.infinity()
            lam = (3 * x1 * x1 + 2 * A * x1 - 4) / (2 * y1)
        else:
            lam = (y2 - y1) / (x2 - x1)
        x3 = lam * lam - A - x1 - x2
        y3 = lam * (x1 - x3) - y1
        return CurvePoint(self.curve, x3, y3, _check=False)

    def __sub__(self, other: "CurvePoint") -> "CurvePoint":
        return self + (-other)

    def __rmul__(self, k: int) -> "CurvePoint":
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return (-k) * (-self)
        acc = self.curve.infinity()
        add = self
        while k:
            if k & 1:
                acc = acc + add
            k >>= 1
            if k:
                add = add + add
        return acc

    def __eq__(self, other):
        if not isinstance(other, CurvePoint):
            return NotImplemented
        return (
            self.curve == other.curve
            and self.x == other.x
            and self.y == other.y
        )

    def __hash__(self):
        return hash((self.x, self.y))

    def order(self, bound: int = 16) -> int:
        """Order of a torsion point (raises if above bound)."""
        acc = self
        for k in range(1, bound + 1):
            if acc.is_infinity:
                return k
            acc = acc + self
        raise ValueError(f"order exceeds {bound}")

    def __repr__(self):
        if self.is_infinity:
            return "O"
        return f"({self.x}, {self.y})"


# ---------------------------------------------------------------------------
# Halving and torsion over Q


def _divisors(n: int) -> list[int]:
    ds = [1]
    for p, e in factorize(n):
        ds = [d * p**k for d in ds for k in range(e + 1)]
    return ds


def rational_roots(coeffs: list[Fraction]) -> list[Fraction]:
    """All rational roots of the polynomial with the given coefficients
    (leading first), by the rational-root theorem on the cleared form.

    Candidates p/q (p | constant, q | leading) are screened with the
    divisibility tests (p - q) | f(1) and (p + q) | f(-1) before the exact
    integer evaluation, which keeps large smooth coefficients tractable.
    """
    coeffs = [Fraction(c) for c in coeffs]
    while coeffs and coeffs[0] == 0:
        coeffs = coeffs[1:]
    if not coeffs:
        raise ValueError("zero polynomial")
    lcm = 1
    for c in coeffs:
        lcm = lcm * c.denominator // gcd(lcm, c.denominator)
    ints = [int(c * lcm) for c in coeffs]
    roots = []
    if ints[-1] == 0:
        roots.append(Fraction(0))
        while ints[-1] == 0:
            ints = ints[:-1]
    if len(ints) == 1:
        return sorted(roots)

    def cleared_value(p: int, q: int) -> int:
        # q^deg * f(p/q), exact two-variable Horner
        acc = ints[0]
        qpow = 1
        for c in ints[1:]:
            qpow *= q
            acc = acc * p + c * qpow
        return acc

    f_one = sum(ints)
    f_minus = sum(c if (len(ints) - 1 - i) % 2 == 0 else -c for i, c in enumerate(ints))
    if f_one == 0:
        roots.append(Fraction(1))
    if f_minus == 0:
        roots.append(Fraction(-1))
    lead, const = ints[0], ints[-1]
    seen = set(roots)
    for q in _divisors(abs(lead)):
        for p in _divisors(abs(const)):
            if gcd(p, q) != 1:
                continue
            for pp in (p, -p):
                cand = Fraction(pp, q)
                if cand in seen:
                    continue
                if f_one and (pp - q) != 0 and f_one % (pp - q):
                    continue
                if f_minus and (pp + q) != 0 and f_minus % (pp + q):
                    continue
                if cleared_value(pp, q) == 0:
                    roots.append(cand)
                    seen.add(cand)
    return sorted(roots)


def halve(curve: EllipticFamily, T: CurvePoint) -> list[CurvePoint]:
    """All rational Q with 2Q = T (possibly empty).

    For 2-torsion T = (t, 0) the candidate abscissae are closed-form: the
    degree-4 condition x(2Q) = t collapses to (x - t)^2 = (t - r_j)(t - r_k)
    (translating by T fixes each preimage's abscissa).  Otherwise the roots
    of the duplication quartic x^4 - 2bx^2 - 8cx + (b^2 - 4ac) - 4 x(T) * rhs
    are extracted by the rational-root theorem.
    """
    if curve.field_prime is not None:
        raise ValueError("halving is implemented over the rationals")
    if T.is_infinity:
        return [curve.infinity(), *curve.two_torsion()]
    A = curve.A
    xT = T.x
    if not T.y:
        others = [r for r in curve.roots if r != xT]
        g = _fraction_sqrt((xT - others[0]) * (xT - others[1]))
        candidates = [] if g is None else [xT + g, xT - g]
    else:
        a, b, c = A, Fraction(-4), -4 * A
        quartic = [
            Fraction(1),
            -4 * xT,
            -(2 * b + 4 * a * xT),
            -(8 * c + 4 * b * xT),
            (b * b - 4 * a * c) - 4 * c * xT,
        ]
        candidates = rational_roots(quartic)
    out = []
    for x0 in candidates:
        y0 = _fraction_sqrt(curve.rhs(x0))
        if y0 is None:
            continue
        for yy in {y0, -y0}:
            Q = CurvePoint(curve, x0, yy, _check=False)
            if Q + Q == T:
                out.append(Q)
    return sorted(out, key=lambda P: (P.x, P.y))


@dataclass(frozen=True)
class TorsionGroup:
    points: tuple[CurvePoint, ...]
    structure: tuple[int, int]  # (n1, n2): Z/n1 x Z/n2 with n2 | n1
    generator: CurvePoint  # of maximal order
    t4: CurvePoint | None  # an order-4 point when one exists
    double_t4_label: int | None  # 1, 2 or 3: which root point equals 2*t4

    @property
    def order(self) -> int:
        return len(self.points)


def torsion_subgroup(curve: EllipticFamily) -> TorsionGroup:
    """Torsion over Q from the full 2-torsion plus two rounds of halving,
    closed under addition (the group shape caps rational torsion at 16)."""
    if curve.field_prime is not None:
        raise ValueError("torsion search runs over the rationals")
    pts = {curve.infinity(), *curve.two_torsion()}
    for _ in range(2):
        new = set()
        for T in pts:
            if T.is_infinity:
                continue
            new.update(halve(curve, T))
        pts |= new
    # close under addition
    changed = True
    while changed:
        changed = False
        for P in list(pts):
            for Q in list(pts):
                R = P + Q
                if R not in pts:
                    pts.add(R)
                    changed = True
    ordered = sorted(
        pts,
        key=lambda P: (1, P.x, P.y) if not P.is_infinity else (0, Fraction(0), Fraction(0)),
    )
    orders = {P: P.order() for P in ordered}
    n1 = max(orders.values())
    n2 = len(pts) // n1
    gen = next(P for P in ordered if orders[P] == n1)
    t4 = next((P for P in ordered if orders[P] == 4), None)
    label = None
    if t4 is not None:
        doubled = t4 + t4
        for i, T in enumerate(curve.two_torsion(), start=1):
            if doubled == T:
                label = i
    return TorsionGroup(tuple(ordered), (n1, n2), gen, t4, label)


# ---------------------------------------------------------------------------
# The bridge functions and the octic curve


def M_value(curve: EllipticFamily, P: CurvePoint):
    """M = 4(x + A)/(x^2 - 4); the square of f."""
    if P.is_infinity:
        raise ValueError("M has a pole at infinity")
    x = P.x
    if x == 2 or x == -2:
        raise ValueError("M has a pole at x = +-2")
    return 4 * (x + curve.A) / (x * x - 4)


def f_value(curve: EllipticFamily, P: CurvePoint):
    """f = 2y/((x - 2)(x + 2)); f^2 = M wherever both are defined."""
    if P.is_infinity:
        raise ValueError("f has a pole at infinity")
    x = P.x
    if x == 2 or x == -2:
        raise ValueError("f has a pole at x = +-2")
    return 2 * P.y / ((x - 2) * (x + 2))


OCTIC_MODELS = ("lambda", "mu", "eta", "sigma")


@dataclass(frozen=True)
class QuarticModelPoint:
    """A point on the octic curve or one of its three quotient models."""

    model: str
    coords: tuple


def octic_rhs(A, t):
    return t**8 + A * t**4 + 1


def model_rhs(A, model: str, t):
    if model == "lambda":
        return octic_rhs(A, t)
    if model == "mu":
        return t**4 + A * t * t + 1
    if model == "eta":
        return t**4 - 4 * t * t + (A + 2)
    if model == "sigma":
        return t**4 + 4 * t * t + (A + 2)
    raise ValueError(f"unknown model {model!r}")


def octic_point(A, lam, w) -> QuarticModelPoint:
    if w * w != octic_rhs(A, lam):
        raise ValueError(f"({lam}, {w}) is not on the octic curve")
    return QuarticModelPoint("lambda", (lam, w))


def quotient_map(A, point: QuarticModelPoint, which: str) -> QuarticModelPoint:
    """Push an octic point down one of the three involution quotients:
    mu = lam^2 (same w), eta = lam + 1/lam, sigma = lam - 1/lam (u = w/lam^2)."""
    if point.model != "lambda":
        raise ValueError("quotient maps start from the octic model")
    lam, w = point.coords
    if which == "mu":
        image = QuarticModelPoint("mu", (lam * lam, w))
    elif which in ("eta", "sigma"):
        if not lam:
            raise ValueError("lambda = 0 is a pole of the reciprocal maps")
        u = w / (lam * lam)
        t = lam + 1 / lam if which == "eta" else lam - 1 / lam
        image = QuarticModelPoint(which, (t, u))
    else:
        raise ValueError(f"unknown quotient {which!r}")
    t, u = image.coords
    assert u * u == model_rhs(A, image.model, t)
    return image


@dataclass(frozen=True)
class LiftResult:
    """Outcome of lifting P to the octic curve through f: the lift exists iff
    f(P) is a nonzero square different from 1 in the point's field."""

    ok: bool
    f: object
    reason: str | None = None
    witness: object = None  # square-class witness when no lift exists
    point: QuarticModelPoint | None = None


def lift_to_genus3(curve: EllipticFamily, P: CurvePoint) -> LiftResult:
    f = f_value(curve, P)
    if not f:
        return LiftResult(False, f, reason="degenerate (lambda = 0)")
    if f == 1:
        return LiftResult(False, f, reason="degenerate (lambda = +-1)")
    if curve.field_prime is None:
        if f < 0:
            return LiftResult(False, f, reason="negative", witness=squarefree_part(f))
        lam = _fraction_sqrt(f)
        if lam is None:
            return LiftResult(False, f, reason="not a square", witness=squarefree_part(f))
    else:
        if not f.is_square():
            return LiftResult(False, f, reason="not a square", witness=f)
        lam = f.sqrt()
    w2 = octic_rhs(curve.A, lam)
    if curve.field_prime is None:
        w = _fraction_sqrt(w2)
        assert w is not None, "f square but octic value is not: group-law bug"
    else:
        assert w2.is_square(), "f square but octic value is not: group-law bug"
        w = w2.sqrt()
    return LiftResult(True, f, point=octic_point(curve.A, lam, w))


def x_translate_t2(A, x):
    """x(P + (2,0)) as a function of x(P); matches the group law."""
    return 2 * (x + 2 * A + 2) / (x - 2)


__all__ = [
    "CurvePoint",
    "DegenerateFamilyError",
    "EllipticFamily",
    "LiftResult",
    "M_value",
    "OCTIC_MODELS",
    "QuarticModelPoint",
    "TorsionGroup",
    "f_value",
    "halve",
    "lift_to_genus3",
    "model_rhs",
    "octic_point",
    "octic_rhs",
    "quotient_map",
    "rational_roots",
    "torsion_subgroup",
    "x_translate_t2",
]
