"""Exact integer and rational arithmetic: perfect squares, factoring,
square classes, and Gaussian-integer valuations.

Everything here is deterministic: the rho-style factoring walks a fixed
parameter schedule, so repeated runs factor identically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

TRIAL_DIVISION_BOUND = 10_000


def _sieve(limit: int) -> list[int]:
    flags = bytearray([1]) * (limit + 1)
    flags[0] = flags[1] = 0
    for p in range(2, math.isqrt(limit) + 1):
        if flags[p]:
            flags[p * p :: p] = bytearray(len(flags[p * p :: p]))
    return [i for i, f in enumerate(flags) if f]


SMALL_PRIMES = _sieve(TRIAL_DIVISION_BOUND)
_SMALL_PRIME_SET = set(SMALL_PRIMES)

# Bit i set iff i is a square residue mod 64; cheap reject before isqrt.
_SQUARE_MASK_64 = 0
for _k in range(64):
    _SQUARE_MASK_64 |= 1 << (_k * _k % 64)

# Deterministic Miller-Rabin witness set: correct for all n < 3.3 * 10**24,
# which covers every value the desk-scale computations produce.  Larger
# inputs additionally get a fixed extra battery (no randomness).
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
_MR_EXTRA = (41, 43, 47, 53, 59, 61, 67, 71)
_MR_DETERMINISTIC_BOUND = 3_317_044_064_679_887_385_961_981


def is_perfect_square(n: int) -> tuple[bool, int | None]:
    """Exact square test; returns (True, root) with root >= 0 on success."""
    if n < 0:
        return False, None
    if not (_SQUARE_MASK_64 >> (n & 63)) & 1:
        return False, None
    r = math.isqrt(n)
    if r * r == n:
        return True, r
    return False, None


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n <= TRIAL_DIVISION_BOUND:
        return n in _SMALL_PRIME_SET
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return False
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    bases = _MR_BASES if n < _MR_DETERMINISTIC_BOUND else _MR_BASES + _MR_EXTRA
    for a in bases:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _brent_rho(n: int) -> int:
    """Non-trivial factor of composite odd n, Brent's cycle variant with a
    fixed parameter schedule (c = 1, 2, 3, ...)."""
    if n % 2 == 0:
        return 2
    for c in range(1, 100):
        y, r, q = 2, 1, 1
        g = 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(128, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                k += 128
                g = math.gcd(q, n)
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g
    raise ArithmeticError(f"rho failed to split {n}")


@dataclass(frozen=True)
class Factorization:
    """Sign and sorted (prime, exponent) pairs; product reconstructs the input."""

    sign: int
    factors: tuple[tuple[int, int], ...]

    def value(self) -> int:
        n = self.sign
        for p, e in self.factors:
            n *= p**e
        return n

    def valuation(self, p: int) -> int:
        for q, e in self.factors:
            if q == p:
                return e
        return 0

    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)

    def __iter__(self):
        return iter(self.factors)


def factorize(n: int) -> Factorization:
    """Complete deterministic factorization (trial division, then Brent rho)."""
    if n == 0:
        raise ValueError("cannot factor 0")
    sign = 1 if n > 0 else -1
    n = abs(n)
    exponents: dict[int, int] = {}
    for p in SMALL_PRIMES:
        if p * p > n:
            break
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            exponents[p] = e
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_prime(m):
            exponents[m] = exponents.get(m, 0) + 1
            continue
        ok, r = is_perfect_square(m)
        if ok:
            stack.extend((r, r))
            continue
        d = _brent_rho(m)
        stack.extend((d, m // d))
    return Factorization(sign, tuple(sorted(exponents.items())))


def squarefree_part(q: int | Fraction) -> int:
    """The unique squarefree integer d with q/d a square of a rational."""
    q = Fraction(q)
    if q == 0:
        raise ValueError("0 has no squarefree part")
    n = q.numerator * q.denominator
    out = 1 if n > 0 else -1
    for p, e in factorize(abs(n)):
        if e % 2:
            out *= p
    return out


def int_valuation(n: int, p: int) -> int:
    """v_p(n) for n != 0."""
    if n == 0:
        raise ValueError("valuation of 0")
    v = 0
    n = abs(n)
    while n % p == 0:
        n //= p
        v += 1
    return v


def rational_valuation(q: Fraction, p: int) -> int:
    if q == 0:
        raise ValueError("valuation of 0")
    return int_valuation(q.numerator, p) - int_valuation(q.denominator, p)


# ---------------------------------------------------------------------------
# Gaussian integers


@dataclass(frozen=True)
class GaussianInt:
    re: int
    im: int

    def norm(self) -> int:
        return self.re * self.re + self.im * self.im

    def conj(self) -> "GaussianInt":
        return GaussianInt(self.re, -self.im)

    def __mul__(self, other: "GaussianInt") -> "GaussianInt":
        return GaussianInt(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    def __repr__(self) -> str:
        return f"{self.re}{self.im:+d}i"


def _exact_div(z: GaussianInt, w: GaussianInt) -> GaussianInt | None:
    """z / w in Z[i] when the division is exact, else None."""
    n = w.norm()
    t = z * w.conj()
    if t.re % n or t.im % n:
        return None
    return GaussianInt(t.re // n, t.im // n)


def canonical_gaussian_prime(p: int) -> GaussianInt:
    """For split p = 1 (mod 4): the prime x + yi above p with x > y > 0."""
    if p % 4 != 1 or not is_prime(p):
        raise ValueError(f"{p} is not a split prime")
    # square root of -1 mod p from a quadratic non-residue
    for a in range(2, p):
        if pow(a, (p - 1) // 2, p) == p - 1:
            r = pow(a, (p - 1) // 4, p)
            break
    # Cornacchia descent on (p, r)
    a0, b0 = p, r
    bound = math.isqrt(p)
    while b0 > bound:
        a0, b0 = b0, a0 % b0
    x, y = b0, math.isqrt(p - b0 * b0)
    assert x * x + y * y == p
    x, y = max(x, y), min(x, y)
    return GaussianInt(x, y)


@dataclass(frozen=True)
class GaussianValuation:
    """Valuation data of z at the primes of Z[i] above p.

    kind "split":    v and v_conj are the valuations at the canonical prime
                     pi (x > y > 0) and its conjugate.
    kind "inert":    v is the valuation at p itself.
    kind "ramified": v is the valuation at 1 + i.
    """

    prime: int
    kind: str
    v: int
    v_conj: int | None = None
    pi: GaussianInt | None = None

    @property
    def norm_valuation(self) -> int:
        """v_p of norm(z), reconstructed from the Gaussian data."""
        if self.kind == "split":
            return self.v + self.v_conj
        if self.kind == "inert":
            return 2 * self.v
        return self.v  # ramified: N(1+i) = 2


def _pi_valuation(z: GaussianInt, pi: GaussianInt) -> int:
    v = 0
    while True:
        w = _exact_div(z, pi)
        if w is None:
            return v
        z = w
        v += 1


def gaussian_valuations(z: GaussianInt, p: int) -> GaussianValuation:
    """Valuations of z != 0 at the Gaussian primes above the rational prime p."""
    if z.re == 0 and z.im == 0:
        raise ValueError("valuation of 0")
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if p == 2:
        v = _pi_valuation(z, GaussianInt(1, 1))
        return GaussianValuation(p, "ramified", v)
    if p % 4 == 3:
        v = min(int_valuation(z.re, p) if z.re else 10**9,
                int_valuation(z.im, p) if z.im else 10**9)
        return GaussianValuation(p, "inert", v)
    pi = canonical_gaussian_prime(p)
    return GaussianValuation(
        p, "split", _pi_valuation(z, pi), _pi_valuation(z, pi.conj()), pi
    )
