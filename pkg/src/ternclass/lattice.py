"""Integral ternary Gram matrices: parsing, reduction, canonical form, short vectors."""

from __future__ import annotations

import json
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Iterable, Sequence

from . import kernels
from .linalg import Matrix, as_matrix, congruent, det3, identity, matmul, transpose


class InputError(ValueError):
    """Malformed or unsupported input (usage error)."""


class HalfIntegralError(InputError):
    """Off-diagonal entry given as a half-integer; only integral Grams are accepted."""


class NotPositiveDefinite(InputError):
    pass


Gram = Matrix


def from_six(a11, a22, a33, a23, a13, a12) -> Gram:
    return ((a11, a12, a13), (a12, a22, a23), (a13, a23, a33))


def six(g: Gram) -> tuple[int, int, int, int, int, int]:
    return (g[0][0], g[1][1], g[2][2], g[1][2], g[0][2], g[0][1])


def _to_int(tok) -> int:
    if isinstance(tok, bool):
        raise InputError(f"bad entry {tok!r}")
    if isinstance(tok, int):
        return tok
    if isinstance(tok, float):
        if tok != int(tok):
            raise HalfIntegralError(f"non-integral entry {tok}")
        return int(tok)
    s = str(tok).strip()
    try:
        q = Fraction(s)
    except (ValueError, ZeroDivisionError):
        raise InputError(f"bad entry {tok!r}") from None
    if q.denominator != 1:
        raise HalfIntegralError(f"non-integral entry {s}")
    return int(q)


def check_gram(g: Sequence[Sequence[int]]) -> Gram:
    g = as_matrix(g)
    if len(g) != 3 or any(len(r) != 3 for r in g):
        raise InputError("Gram matrix must be 3x3")
    for i in range(3):
        for j in range(3):
            if g[i][j] != g[j][i]:
                raise InputError("Gram matrix must be symmetric")
    if not (g[0][0] > 0 and g[0][0] * g[1][1] - g[0][1] ** 2 > 0 and det3(g) > 0):
        raise NotPositiveDefinite("form is not positive definite")
    return g


def parse_gram(text: str) -> Gram:
    """Six integers 'a11 a22 a33 a23 a13 a12' or a JSON 3x3 array."""
    text = text.strip()
    if text.startswith("["):
        try:
            rows = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InputError(f"bad JSON: {exc}") from None
        if not isinstance(rows, list) or len(rows) != 3 or any(not isinstance(r, list) for r in rows):
            raise InputError("expected a 3x3 array")
        return check_gram([[_to_int(x) for x in r] for r in rows])
    toks = text.replace(",", " ").split()
    if len(toks) != 6:
        raise InputError("expected six entries a11 a22 a33 a23 a13 a12")
    return check_gram(from_six(*[_to_int(t) for t in toks]))


def disc(g: Gram) -> int:
    return det3(g)


def content(g: Gram) -> int:
    c = 0
    for row in g:
        for x in row:
            c = gcd(c, x)
    return c


def primitive(g: Gram) -> Gram:
    c = content(g)
    return tuple(tuple(x // c for x in r) for r in g)


def scale(g: Gram, c: int) -> Gram:
    return tuple(tuple(x * c for x in r) for r in g)


def is_even(g: Gram) -> bool:
    return all(g[i][i] % 2 == 0 for i in range(3))


def qform(g: Gram, v: Sequence[int]) -> int:
    return sum(g[i][j] * v[i] * v[j] for i in range(3) for j in range(3))


def bform(g: Gram, u: Sequence[int], v: Sequence[int]) -> int:
    return sum(g[i][j] * u[i] * v[j] for i in range(3) for j in range(3))


def diag(a: int, b: int, c: int) -> Gram:
    return ((a, 0, 0), (0, b, 0), (0, 0, c))


# --- short vectors ---------------------------------------------------------

def _enum(g: Gram, bound: int, zlo: int, zhi: int):
    a, b, c, f, e, h = g[0][0], g[1][1], g[2][2], g[1][2], g[0][2], g[0][1]
    return kernels.enum_vectors(a, b, c, f, e, h, bound, zlo, zhi)


def short_vectors(g: Gram, bound: int) -> list[tuple[tuple[int, int, int], int]]:
    """All v != 0 with Q(v) <= bound, sorted by (Q(v), v)."""
    big = 1 << 60
    out = [((x, y, z), n) for x, y, z, n in _enum(g, bound, -big, big)]
    out.sort(key=lambda t: (t[1], t[0]))
    return out


def representation_count(g: Gram, t: int) -> int:
    if t < 0:
        return 0
    if t == 0:
        return 1
    return sum(1 for _, n in short_vectors(g, t) if n == t)


# --- reduction -------------------------------------------------------------

def _gauss2(g: Gram, t: list[list[int]]) -> None:
    """Lagrange-reduce the first two basis vectors (columns of t) in place."""
    while True:
        b0, b1 = [r[0] for r in t], [r[1] for r in t]
        q0, q1 = qform(g, b0), qform(g, b1)
        if q1 < q0:
            for r in t:
                r[0], r[1] = r[1], r[0]
            continue
        k = bform(g, b0, b1)
        m = _round_div(k, q0)
        if m == 0:
            return
        for r in t:
            r[1] -= m * r[0]
        if qform(g, [r[1] for r in t]) >= q0:
            return


def _round_div(a: int, b: int) -> int:
    # nearest integer to a/b, b > 0
    return (2 * a + b) // (2 * b)


def _closest_in_plane(g: Gram, t: list[list[int]]) -> None:
    """Replace b2 by the shortest vector of b2 + span(b0, b1) (exact)."""
    h = congruent(g, t)
    # Babai point for an upper bound
    num0 = h[0][2] * h[1][1] - h[1][2] * h[0][1]
    num1 = h[1][2] * h[0][0] - h[0][2] * h[0][1]
    den = h[0][0] * h[1][1] - h[0][1] ** 2
    c0 = -_round_div(num0, den)
    c1 = -_round_div(num1, den)
    v = (c0, c1, 1)
    bound = qform(h, v)
    best = (bound, v)
    for x, y, z, n in _enum(h, bound, 1, 1):
        if (n, (x, y, z)) < best:
            best = (n, (x, y, z))
    x, y, _ = best[1]
    for r in t:
        r[2] += x * r[0] + y * r[1]


def reduce(g: Gram) -> tuple[Gram, Matrix]:
    """Minkowski-reduce (greedy, exact closest-vector steps). Returns (R, T) with T^t G T = R."""
    g = check_gram(g)
    t = [list(r) for r in identity()]
    while True:
        _gauss2(g, t)
        _closest_in_plane(g, t)
        q = [qform(g, [r[i] for r in t]) for i in range(3)]
        if q[2] < q[1]:
            for r in t:
                r[1], r[2] = r[2], r[1]
            continue
        break
    T = as_matrix(t)
    return congruent(g, T), T


# --- canonical form --------------------------------------------------------

def _by_norm(vecs):
    out: dict[int, list] = {}
    for v, n in vecs:
        out.setdefault(n, []).append(v)
    return out


def _minimal_bases(r: Gram):
    """All bases of a Minkowski-reduced R realising its successive minima."""
    l1, l2, l3 = r[0][0], r[1][1], r[2][2]
    if l2 == l3:
        sv = _by_norm(short_vectors(r, l3))
        s3 = sv.get(l3, [])
    else:
        sv = _by_norm(short_vectors(r, l2))
        # plane vectors cannot complete a basis, so skip the (possibly huge) z = 0 slice
        s3 = [(x, y, z) for x, y, z, n in _enum(r, l3, 1, 1 << 60) if n == l3]
        s3 += [(-x, -y, -z) for x, y, z in s3]
    s1 = sv.get(l1, [])
    s2 = sv.get(l2, [])
    for b1 in s1:
        for b2 in s2:
            c = (b1[1] * b2[2] - b1[2] * b2[1], b1[2] * b2[0] - b1[0] * b2[2], b1[0] * b2[1] - b1[1] * b2[0])
            if c == (0, 0, 0):
                continue
            for b3 in s3:
                dt = c[0] * b3[0] + c[1] * b3[1] + c[2] * b3[2]
                if dt == 1 or dt == -1:
                    yield (b1, b2, b3)


def _gram_of_basis(r: Gram, basis) -> tuple:
    b1, b2, b3 = basis
    return (qform(r, b1), qform(r, b2), qform(r, b3), bform(r, b2, b3), bform(r, b1, b3), bform(r, b1, b2))


def _canonical_data(g: Gram):
    r, t = reduce(g)
    best = None
    hits = []
    for basis in _minimal_bases(r):
        key = _gram_of_basis(r, basis)
        if best is None or key < best:
            best = key
            hits = [basis]
        elif key == best:
            hits.append(basis)
    # transforms from the original coordinates
    mats = [matmul(t, transpose(bs)) for bs in hits]
    return best, mats


@lru_cache(maxsize=200000)
def _canonical_cached(g: Gram):
    return _canonical_data(g)


def canonical_form(g: Gram) -> tuple[Gram, Matrix]:
    """Canonical representative of the class of G and a transform T with T^t G T = canonical.

    Canonical = the reduced Gram whose (a11, a22, a33, a23, a13, a12) is lexicographically
    smallest among bases realising the successive minima.
    """
    g = check_gram(g)
    key, mats = _canonical_cached(g)
    c = from_six(*key)
    if c == g and identity() in mats:
        return c, identity()
    return c, max(mats)


def canonical_key(g: Gram) -> tuple[int, ...]:
    return _canonical_cached(check_gram(g))[0]


def is_isometric(g1: Gram, g2: Gram) -> tuple[bool, Matrix | None]:
    """Returns (True, T) with T^t G1 T = G2 when isometric."""
    c1, t1 = canonical_form(g1)
    c2, t2 = canonical_form(g2)
    if c1 != c2:
        return False, None
    from .linalg import unimodular_inverse
    return True, matmul(t1, unimodular_inverse(t2))


def automorphisms(g: Gram) -> list[Matrix]:
    """O(G) as integer matrices s with s^t G s = G."""
    from .linalg import unimodular_inverse
    g = check_gram(g)
    _, mats = _canonical_cached(g)
    inv0 = unimodular_inverse(mats[0])
    return sorted(matmul(m, inv0) for m in mats)


# --- named lattices and families -------------------------------------------

I3 = diag(1, 1, 1)
A3 = ((2, 1, 0), (1, 2, 1), (0, 1, 2))  # root lattice A_3
J3 = ((3, -1, -1), (-1, 3, -1), (-1, -1, 3))  # primitive adjoint of A_3


def K1(a: int, b: int) -> Gram:
    return ((2 * a, -a, -a), (-a, 2 * a, 0), (-a, 0, b))


def K2(a: int, b: int) -> Gram:
    return ((2 * a, -a, 0), (-a, 2 * a, 0), (0, 0, b))


def K3(a: int, b: int) -> Gram:
    return diag(a, a, b)


def K4(a: int, b: int) -> Gram:
    return ((2 * a, 0, -a), (0, 2 * a, -a), (-a, -a, b))


def K_family(n: int) -> Gram:
    """[[2,0,-7^n],[0,2,-7^n],[-7^n,-7^n,7^(2n+1)]]."""
    s = 7 ** n
    return ((2, 0, -s), (0, 2, -s), (-s, -s, 7 * s * s))


def unimodular_random(rng, size: int = 3, steps: int = 6) -> Matrix:
    """Random product of elementary matrices (for tests and instance generation)."""
    t = [list(r) for r in identity()]
    for _ in range(steps):
        i, j = rng.sample(range(3), 2)
        k = rng.randint(-size, size)
        for r in t:
            r[j] += k * r[i]
    return as_matrix(t)


def vec_str(v: Iterable[int]) -> str:
    return "(" + ",".join(str(x) for x in v) + ")"
