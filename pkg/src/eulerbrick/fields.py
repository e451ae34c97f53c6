"""Minimal prime-field arithmetic so the group law runs unchanged over Q
(fractions) and over F_p (these elements)."""

from __future__ import annotations


def legendre(a: int, p: int) -> int:
    """0, 1 or -1 according to the quadratic character of a mod p (p odd)."""
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def sqrt_mod(a: int, p: int) -> int:
    """A square root of a mod p (Tonelli-Shanks); a must be a residue."""
    a %= p
    if a == 0:
        return 0
    if p % 4 == 3:
        r = pow(a, (p + 1) // 4, p)
    else:
        q, s = p - 1, 0
        while q % 2 == 0:
            q //= 2
            s += 1
        z = 2
        while legendre(z, p) != -1:
            z += 1
        m, c = s, pow(z, q, p)
        t, r = pow(a, q, p), pow(a, (q + 1) // 2, p)
        while t != 1:
            t2, i = t, 0
            while t2 != 1:
                t2 = t2 * t2 % p
                i += 1
            b = pow(c, 1 << (m - i - 1), p)
            m, c = i, b * b % p
            t, r = t * c % p, r * b % p
    if r * r % p != a:
        raise ValueError(f"{a} is not a square mod {p}")
    return r


class Fp:
    """An element of F_p supporting the arithmetic the group law needs."""

    __slots__ = ("p", "v")

    def __init__(self, p: int, v: int):
        self.p = p
        self.v = v % p

    def _wrap(self, v: int) -> "Fp":
        return Fp(self.p, v)

    def _val(self, other) -> int:
        if isinstance(other, Fp):
            if other.p != self.p:
                raise ValueError("mixed characteristics")
            return other.v
        if isinstance(other, int):
            return other
        return NotImplemented

    def __add__(self, other):
        v = self._val(other)
        return NotImplemented if v is NotImplemented else self._wrap(self.v + v)

    __radd__ = __add__

    def __sub__(self, other):
        v = self._val(other)
        return NotImplemented if v is NotImplemented else self._wrap(self.v - v)

    def __rsub__(self, other):
        v = self._val(other)
        return NotImplemented if v is NotImplemented else self._wrap(v - self.v)

    def __mul__(self, other):
        v = self._val(other)
        return NotImplemented if v is NotImplemented else self._wrap(self.v * v)

    __rmul__ = __mul__

    def __truediv__(self, other):
        v = self._val(other)
        if v is NotImplemented:
            return v
        return self._wrap(self.v * pow(v, self.p - 2, self.p))

    def __rtruediv__(self, other):
        v = self._val(other)
        if v is NotImplemented:
            return v
        return self._wrap(v * pow(self.v, self.p - 2, self.p))

    def __pow__(self, e: int):
        return self._wrap(pow(self.v, e, self.p))

    def __neg__(self):
        return self._wrap(-self.v)

    def __eq__(self, other):
        if isinstance(other, Fp):
            return self.p == other.p and self.v == other.v
        if isinstance(other, int):
            return self.v == other % self.p
        return NotImplemented

    def __hash__(self):
        return hash((self.p, self.v))

    def __bool__(self):
        return self.v != 0

    def __repr__(self):
        return f"{self.v} (mod {self.p})"

    def is_square(self) -> bool:
        return legendre(self.v, self.p) >= 0

    def sqrt(self) -> "Fp":
        return self._wrap(sqrt_mod(self.v, self.p))
