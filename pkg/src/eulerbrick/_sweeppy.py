"""Pure-Python sweep kernel (numpy prefilter, exact stage in Python ints).

Same contract as the compiled kernel in _sweepcore.pyx.
"""

from __future__ import annotations

from math import gcd, isqrt

import numpy as np

_SQUARE_MASK_64 = 0
for _k in range(64):
    _SQUARE_MASK_64 |= 1 << (_k * _k % 64)


def _is_square(v: int) -> bool:
    if v == 0:
        return True
    if not (_SQUARE_MASK_64 >> (v & 63)) & 1:
        return False
    r = isqrt(v)
    return r * r == v


def scan_pair(cu, cv, cw, g2m, h2m, g, h, qr, modulus, both, prefilter):
    """Scan one first pair against every second pair; see _sweepcore.scan_pair."""
    if prefilter:
        f1m = (cu % modulus) * g2m + (cw % modulus) * h2m
        f1m %= modulus
        f2m = (cv % modulus) * g2m + (cw % modulus) * h2m
        f2m %= modulus
        if both:
            mask = qr[f1m] & qr[f2m]
        else:
            mask = qr[(f1m * f2m) % modulus]
        idx = np.nonzero(mask)[0]
    else:
        idx = range(len(g2m))
    cu, cv, cw = int(cu), int(cv), int(cw)
    survivors = 0
    hits = []
    for i in idx:
        i = int(i)
        survivors += 1
        gi = int(g[i])
        hi = int(h[i])
        gsq = gi * gi
        hsq = hi * hi
        f1 = cu * gsq + cw * hsq
        f2 = cv * gsq + cw * hsq
        if both:
            hit = _is_square(f1) and _is_square(f2)
        else:
            d = gcd(f1, f2)
            hit = _is_square(f1 // d) and _is_square(f2 // d)
        if hit:
            hits.append(i)
    return survivors, hits
