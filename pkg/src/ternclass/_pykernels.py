"""Pure-Python hot loops. The compiled module mirrors these signatures exactly."""

from math import isqrt


def enum_vectors(a, b, c, f, e, h, bound, zlo, zhi):
    """Integer vectors v != 0 with Q(v) <= bound and zlo <= v_z <= zhi.

    Q = a x^2 + b y^2 + c z^2 + 2f yz + 2e xz + 2h xy.  Returns (x, y, z, Q) tuples.
    """
    d2 = a * b - h * h
    det = c * d2 - a * f * f - b * e * e + 2 * f * e * h
    out = []
    if bound <= 0:
        return out
    zmax = isqrt(bound * d2 // det)
    lo = max(zlo, -zmax)
    hi = min(zhi, zmax)
    p = a * f - h * e
    r = a * c - e * e
    for z in range(lo, hi + 1):
        bz = p * z
        disc = bz * bz - d2 * (r * z * z - a * bound)
        if disc < 0:
            continue
        s = isqrt(disc)
        ylo = -((bz + s) // d2)
        yhi = (s - bz) // d2
        for y in range(ylo, yhi + 1):
            b1 = h * y + e * z
            c1 = b * y * y + 2 * f * y * z + c * z * z
            disc1 = b1 * b1 - a * (c1 - bound)
            if disc1 < 0:
                continue
            s1 = isqrt(disc1)
            for x in range(-((b1 + s1) // a), (s1 - b1) // a + 1):
                n = a * x * x + 2 * b1 * x + c1
                if 0 < n <= bound:
                    out.append((x, y, z, n))
    return out


def reduced_candidates(d):
    """Sign-normalised forms (a11, a22, a33, a23, a13, a12) satisfying the Minkowski box, det d.

    a11 <= a22 <= a33, -a11 <= 2 a12 <= 0, -a11 <= 2 a13 <= 0, |2 a23| <= a22,
    a11 a22 a33 <= 2d.  Every class of determinant d has a member in the list.
    """
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
                        if num % d2:
                            continue
                        a33 = num // d2
                        if a33 < a22 or a11 * a22 * a33 > 2 * d:
                            continue
                        out.append((a11, a22, a33, a23, a13, a12))
            a22 += 1
        a11 += 1
    return out
