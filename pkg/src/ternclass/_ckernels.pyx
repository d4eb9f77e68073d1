# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=False
"""Compiled versions of the hot loops in _pykernels (int64 arithmetic, caller guards overflow)."""

from libc.math cimport sqrtl

ctypedef long long i64


cdef inline i64 _isqrt(i64 n):
    cdef i64 s
    if n <= 0:
        return 0
    s = <i64>sqrtl(<long double>n)
    while s * s > n:
        s -= 1
    while (s + 1) * (s + 1) <= n:
        s += 1
    return s


cdef inline i64 _floordiv(i64 a, i64 b):
    # python semantics since cdivision is off
    return a // b


def enum_vectors(i64 a, i64 b, i64 c, i64 f, i64 e, i64 h, i64 bound, i64 zlo, i64 zhi):
    cdef i64 d2 = a * b - h * h
    cdef i64 det = c * d2 - a * f * f - b * e * e + 2 * f * e * h
    cdef i64 zmax, lo, hi, p, r, z, bz, disc, s, ylo, yhi, y, b1, c1, disc1, s1, x, xlo, xhi, n
    out = []
    if bound <= 0:
        return out
    zmax = _isqrt(_floordiv(bound * d2, det))
    lo = zlo if zlo > -zmax else -zmax
    hi = zhi if zhi < zmax else zmax
    p = a * f - h * e
    r = a * c - e * e
    for z in range(lo, hi + 1):
        bz = p * z
        disc = bz * bz - d2 * (r * z * z - a * bound)
        if disc < 0:
            continue
        s = _isqrt(disc)
        ylo = -_floordiv(bz + s, d2)
        yhi = _floordiv(s - bz, d2)
        for y in range(ylo, yhi + 1):
            b1 = h * y + e * z
            c1 = b * y * y + 2 * f * y * z + c * z * z
            disc1 = b1 * b1 - a * (c1 - bound)
            if disc1 < 0:
                continue
            s1 = _isqrt(disc1)
            xlo = -_floordiv(b1 + s1, a)
            xhi = _floordiv(s1 - b1, a)
            for x in range(xlo, xhi + 1):
                n = a * x * x + 2 * b1 * x + c1
                if 0 < n <= bound:
                    out.append((x, y, z, n))
    return out


def reduced_candidates(i64 d):
    cdef i64 a11, a22, a12, a13, a23, d2, num, a33
    out = []
    a11 = 1
    while a11 * a11 * a11 <= 2 * d:
        a22 = a11
        while a11 * a22 * a22 <= 2 * d:
            for a12 in range(-(a11 // 2), 1):
                d2 = a11 * a22 - a12 * a12
                for a13 in range(-(a11 // 2), 1):
                    for a23 in range(-(a22 // 2), a22 // 2 + 1):
                        num = d + a11 * a23 * a23 - 2 * a12 * a13 * a23 + a22 * a13 * a13
                        if num % d2 != 0:
                            continue
                        a33 = num // d2
                        if a33 < a22 or a11 * a22 * a33 > 2 * d:
                            continue
                        out.append((a11, a22, a33, a23, a13, a12))
            a22 += 1
        a11 += 1
    return out
