"""Small exact integer linear algebra used throughout (3x3 Grams, lattice bases)."""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence

Matrix = tuple[tuple[int, ...], ...]


def as_matrix(rows: Sequence[Sequence[int]]) -> Matrix:
    return tuple(tuple(int(x) for x in r) for r in rows)


def identity(n: int = 3) -> Matrix:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def transpose(a: Sequence[Sequence]) -> tuple:
    return tuple(zip(*a))


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> tuple:
    bt = list(zip(*b))
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a)


def matvec(a: Sequence[Sequence], v: Sequence) -> tuple:
    return tuple(sum(x * y for x, y in zip(row, v)) for row in a)


def congruent(g: Sequence[Sequence], t: Sequence[Sequence]) -> tuple:
    """T^t G T."""
    return matmul(transpose(t), matmul(g, t))


def det3(m: Sequence[Sequence]):
    return (m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]))


def adj3(m: Sequence[Sequence]) -> tuple:
    c = [[0] * 3 for _ in range(3)]
    for i in range(3):
        for j in range(3):
            r = [k for k in range(3) if k != i]
            s = [k for k in range(3) if k != j]
            minor = m[r[0]][s[0]] * m[r[1]][s[1]] - m[r[0]][s[1]] * m[r[1]][s[0]]
            c[j][i] = minor if (i + j) % 2 == 0 else -minor
    return tuple(tuple(row) for row in c)


def inverse3(m: Sequence[Sequence]) -> tuple:
    d = det3(m)
    if d == 0:
        raise ZeroDivisionError("singular matrix")
    return tuple(tuple(Fraction(x, 1) / d for x in row) for row in adj3(m))


def unimodular_inverse(m: Sequence[Sequence[int]]) -> Matrix:
    d = det3(m)
    if d not in (1, -1):
        raise ValueError("matrix is not unimodular")
    return tuple(tuple(x * d for x in row) for row in adj3(m))


def _echelon(rows: list[list[int]], ncols: int) -> int:
    """In-place integer row echelon on the first ncols columns; returns the rank."""
    r0 = 0
    nrows = len(rows)
    for col in range(ncols):
        while True:
            nz = [i for i in range(r0, nrows) if rows[i][col] != 0]
            if not nz:
                break
            piv = min(nz, key=lambda i: abs(rows[i][col]))
            if len(nz) == 1:
                rows[r0], rows[piv] = rows[piv], rows[r0]
                if rows[r0][col] < 0:
                    rows[r0] = [-x for x in rows[r0]]
                p = rows[r0][col]
                for i in range(r0):
                    q = rows[i][col] // p
                    if q:
                        rows[i] = [x - q * y for x, y in zip(rows[i], rows[r0])]
                r0 += 1
                break
            pr = rows[piv]
            for i in nz:
                if i != piv:
                    q = rows[i][col] // pr[col]
                    rows[i] = [x - q * y for x, y in zip(rows[i], pr)]
        if r0 == nrows:
            break
    return r0


def hnf(vectors: Sequence[Sequence[int]]) -> tuple[tuple[int, ...], ...]:
    """Hermite basis (as rows) of the lattice spanned by the given integer vectors."""
    rows = [list(v) for v in vectors if any(v)]
    if not rows:
        return ()
    n = len(rows[0])
    r = _echelon(rows, n)
    return tuple(tuple(row) for row in rows[:r])


def integer_kernel(a: Sequence[Sequence[int]]) -> list[tuple[int, ...]]:
    """Basis of {x in Z^n : A x = 0} for an integer r x n matrix A."""
    r = len(a)
    n = len(a[0])
    rows = [[a[i][j] for i in range(r)] + [1 if k == j else 0 for k in range(n)] for j in range(n)]
    rank = _echelon(rows, r)
    return [tuple(row[r:]) for row in rows[rank:]]


def kernel_mod(a: Sequence[Sequence[int]], m: int) -> tuple[tuple[int, ...], ...]:
    """Hermite basis of {x in Z^n : A x = 0 mod m}."""
    r = len(a)
    n = len(a[0])
    ext = [list(a[i]) + [-m if k == i else 0 for k in range(r)] for i in range(r)]
    ker = integer_kernel(ext)
    return hnf([v[:n] for v in ker])


def content(g: Sequence[Sequence[int]]) -> int:
    c = 0
    for row in g:
        for x in row:
            c = gcd(c, x)
    return c


def columns(vectors: Sequence[Sequence[int]]) -> Matrix:
    """Matrix whose columns are the given vectors."""
    return tuple(tuple(v[i] for v in vectors) for i in range(len(vectors[0])))
