# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled sweep kernel: residue prefilter plus exact square decision.

All exact arithmetic stays inside 128 bits by never forming f1*f2: with
g = gcd(f1, f2), the product is a square iff f1/g and f2/g are both squares
(they are coprime).
"""

from libc.math cimport sqrtl

cdef extern from *:
    ctypedef unsigned long long u128 "unsigned __int128"

ctypedef unsigned long long u64

# bit i set iff i is a square residue mod 64
cdef u64 SQUARE_MASK_64 = 0
cdef int _k
for _k in range(64):
    SQUARE_MASK_64 |= (<u64>1) << ((_k * _k) & 63)


cdef inline u128 gcd128(u128 a, u128 b) noexcept nogil:
    cdef u128 t
    while b:
        t = a % b
        a = b
        b = t
    return a


cdef inline bint is_square128(u128 v) noexcept nogil:
    cdef u128 r
    if v == 0:
        return True
    if not (SQUARE_MASK_64 >> (<u64>(v & 63))) & 1:
        return False
    r = <u128>sqrtl(<long double>v)
    if r > 0:
        r -= 1
    while (r + 1) * (r + 1) <= v:
        r += 1
    return r * r == v


def scan_pair(
    u64 cu, u64 cv, u64 cw,
    u64[::1] g2m, u64[::1] h2m,
    long long[::1] g, long long[::1] h,
    const unsigned char[::1] qr, u64 modulus,
    bint both, bint prefilter,
):
    """Scan one first pair against every second pair.

    cu, cv, cw are the exact coefficients 4*U1^2, 4*V1^2, W1^2; g2m/h2m the
    precomputed residues of (mn)^2 and (m^2-n^2)^2 mod ``modulus``; g/h the
    exact values.  Returns (survivor_count, hit_indices): survivors of the
    residue prefilter, and the indices whose exact test says square.
    """
    cdef Py_ssize_t n = g2m.shape[0]
    cdef Py_ssize_t i
    cdef u64 cum = cu % modulus
    cdef u64 cvm = cv % modulus
    cdef u64 cwm = cw % modulus
    cdef u64 f1m, f2m
    cdef u128 f1, f2, gg, gsq, hsq
    cdef long long survivors = 0
    cdef bint hit
    hits = []
    for i in range(n):
        if prefilter:
            f1m = (cum * g2m[i] + cwm * h2m[i]) % modulus
            f2m = (cvm * g2m[i] + cwm * h2m[i]) % modulus
            if both:
                if not (qr[f1m] and qr[f2m]):
                    continue
            else:
                if not qr[(f1m * f2m) % modulus]:
                    continue
        survivors += 1
        gsq = <u128>(<u64>g[i]) * <u64>g[i]
        hsq = <u128>(<u64>h[i]) * <u64>h[i]
        f1 = <u128>cu * gsq + <u128>cw * hsq
        f2 = <u128>cv * gsq + <u128>cw * hsq
        if both:
            hit = is_square128(f1) and is_square128(f2)
        else:
            gg = gcd128(f1, f2)
            hit = is_square128(f1 / gg) and is_square128(f2 / gg)
        if hit:
            hits.append(i)
    return survivors, hits
