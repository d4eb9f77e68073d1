"""p-adic invariants: Hilbert and Hasse symbols, Jordan splittings, genus symbols, local representation."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .lattice import Gram, check_gram, disc


def valuation(n, p: int) -> int:
    if isinstance(n, Fraction):
        return valuation(n.numerator, p) - valuation(n.denominator, p)
    if n == 0:
        raise ValueError("valuation of 0")
    v = 0
    n = abs(n)
    while n % p == 0:
        n //= p
        v += 1
    return v


def unit_part(n, p: int):
    """n / p^v(n) as an integer in the same square class (numerator * denominator)."""
    q = Fraction(n)
    a, b = q.numerator, q.denominator
    while a % p == 0:
        a //= p
    while b % p == 0:
        b //= p
    return a * b


def legendre(a: int, p: int) -> int:
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def prime_factors(n: int) -> list[int]:
    n = abs(n)
    out = []
    q = 2
    while q * q <= n:
        if n % q == 0:
            out.append(q)
            while n % q == 0:
                n //= q
        q += 1 if q == 2 else 2
    if n > 1:
        out.append(n)
    return out


def hilbert_symbol(a, b, p: int) -> int:
    """(a, b)_p for nonzero rationals a, b (p prime or -1 for the real place)."""
    a, b = Fraction(a), Fraction(b)
    if p == -1:
        return -1 if (a < 0 and b < 0) else 1
    al, be = valuation(a, p), valuation(b, p)
    u, v = unit_part(a, p), unit_part(b, p)
    if p != 2:
        s = -1 if (al * be * ((p - 1) // 2)) % 2 else 1
        if be % 2:
            s *= legendre(u, p)
        if al % 2:
            s *= legendre(v, p)
        return s
    eps = lambda x: ((x - 1) // 2) % 2
    om = lambda x: ((x * x - 1) // 8) % 2
    e = eps(u) * eps(v) + al * om(v) + be * om(u)
    return -1 if e % 2 else 1


def rational_diagonal(g: Gram) -> list[Fraction]:
    m = [[Fraction(x) for x in r] for r in g]
    out = []
    n = 3
    for k in range(n):
        piv = m[k][k]
        if piv == 0:
            raise ValueError("degenerate form")
        out.append(piv)
        for i in range(k + 1, n):
            f = m[i][k] / piv
            for j in range(k, n):
                m[i][j] -= f * m[k][j]
    return out


def hasse_invariant(g: Gram, p: int) -> int:
    """prod_{i<=j} (a_i, a_j)_p over a diagonalisation."""
    a = rational_diagonal(g)
    s = 1
    for i in range(3):
        for j in range(i, 3):
            s *= hilbert_symbol(a[i], a[j], p)
    return s


def is_anisotropic(g: Gram, p: int) -> bool:
    return hasse_invariant(g, p) != hilbert_symbol(-1, -1, p)


# --- Jordan splittings -------------------------------------------------------

def _split(g: Gram, p: int):
    """p-adic splitting into 1x1 pieces (and 2x2 even blocks when p = 2).

    Returns a list of (scale, kind, unit) with kind 'u' (unit = integer representative
    of the unit class) or 'H' / 'A' for the two even binary blocks.
    """
    m = [[Fraction(x) for x in r] for r in g]
    idx = [0, 1, 2]
    out = []
    inf = 1 << 30

    def v(x):
        return inf if x == 0 else valuation(x, p)

    while idx:
        dmin = min(idx, key=lambda i: v(m[i][i]))
        vd = v(m[dmin][dmin])
        pairs = [(i, j) for a, i in enumerate(idx) for j in idx[a + 1:]]
        vo, po = inf, None
        for i, j in pairs:
            if v(m[i][j]) < vo:
                vo, po = v(m[i][j]), (i, j)
        if vd <= vo:
            i = dmin
            a = m[i][i]
            out.append((vd, "u", unit_part(a, p)))
            rest = [k for k in idx if k != i]
            for k in rest:
                for l in rest:
                    m[k][l] -= m[k][i] * m[i][l] / a
            idx = rest
        elif p != 2:
            i, j = po
            # e_i + e_j has the off-diagonal valuation
            for k in range(3):
                m[i][k] += m[j][k]
            for k in range(3):
                m[k][i] += m[k][j]
        else:
            i, j = po
            a, b, c = m[i][i], m[i][j], m[j][j]
            det = a * c - b * b
            u = unit_part(det, 2) % 8
            out.append((vo, "H" if u == 7 else "A", None))
            rest = [k for k in idx if k not in (i, j)]
            for k in rest:
                x, y = m[k][i], m[k][j]
                for l in rest:
                    s, t = m[i][l], m[j][l]
                    # subtract [x y] B^{-1} [s t]^T
                    m[k][l] -= (x * (c * s - b * t) + y * (-b * s + a * t)) / det
            idx = rest
    out.sort(key=lambda t: t[0])
    return out


@dataclass(frozen=True)
class JordanDecompOdd:
    """L_p = <e1, p^a e2, p^b e3> with exponents (0, a, b) when L is p-primitive."""
    p: int
    exponents: tuple[int, int, int]
    units: tuple[int, int, int]

    @property
    def alpha(self) -> int:
        return self.exponents[1] - self.exponents[0]

    @property
    def beta(self) -> int:
        return self.exponents[2] - self.exponents[0]

    def eps(self, i: int) -> int:
        return self.units[i - 1] % self.p

    def e(self, i: int, j: int) -> int:
        return legendre(-self.units[i - 1] * self.units[j - 1], self.p)

    def eta(self, i: int, j: int) -> int:
        return (1 + legendre(self.units[i - 1] * self.units[j - 1], self.p)) // 2

    def eta_prime(self, i: int, j: int) -> int:
        return (1 - legendre(self.units[i - 1] * self.units[j - 1], self.p)) // 2

    @property
    def case_id(self) -> int:
        """Row of the mass-ratio table (1..8) for ord_p(d) >= 2."""
        a, b = self.alpha, self.beta
        if a == 0:
            if b == 2:
                return 1
            if b >= 3:
                return 2
        elif a == 1:
            if b == 1:
                return 3
            if b == 2:
                return 4
            if b >= 3:
                return 5
        elif a == 2:
            if b == 2:
                return 6
            return 7
        else:
            return 8
        raise ValueError(f"ord_p(d) < 2 for exponents {self.exponents}")

    def unimodular_disc(self) -> int:
        """Discriminant of the unimodular Jordan component (as an integer rep)."""
        d = 1
        for k, u in zip(self.exponents, self.units):
            if k == self.exponents[0]:
                d *= u
        return d


def jordan_odd(g: Gram, p: int) -> JordanDecompOdd:
    if p == 2:
        raise ValueError("use two_adic_symbol for p = 2")
    parts = _split(check_gram(g), p)
    return JordanDecompOdd(p, tuple(s for s, _, _ in parts), tuple(u for _, _, u in parts))


def odd_symbol(g: Gram, p: int) -> tuple:
    parts = _split(g, p)
    comps: dict[int, list[int]] = {}
    for s, _, u in parts:
        comps.setdefault(s, []).append(u)
    out = []
    for s in sorted(comps):
        prod = 1
        for u in comps[s]:
            prod *= u
        out.append((s, len(comps[s]), legendre(prod, p)))
    return tuple(out)


@dataclass(frozen=True)
class Constituent2:
    scale: int
    dim: int
    sign: int
    odd: bool
    oddity: int


def two_adic_constituents(g: Gram) -> list[Constituent2]:
    parts = _split(g, 2)
    comps: dict[int, list] = {}
    for s, kind, u in parts:
        comps.setdefault(s, []).append((kind, u))
    out = []
    for s in sorted(comps):
        dim, det, odd, oddity = 0, 1, False, 0
        for kind, u in comps[s]:
            if kind == "u":
                dim += 1
                det = det * u % 8
                odd = True
                oddity = (oddity + u) % 8
            else:
                dim += 2
                det = det * (7 if kind == "H" else 3) % 8
        out.append(Constituent2(s, dim, 1 if det in (1, 7) else -1, odd, oddity))
    return out


def two_adic_symbol(g: Gram) -> tuple:
    """Canonical 2-adic symbol: signs walked to the head of each train, oddities fused per compartment."""
    cons = {c.scale: c for c in two_adic_constituents(g)}
    scales = sorted(cons)
    lo, hi = scales[0], scales[-1]

    def is_odd(k):
        return k in cons and cons[k].odd

    # compartments: maximal runs of consecutive odd constituents
    comp_of: dict[int, int] = {}
    comps: list[int] = []
    for k in range(lo, hi + 1):
        if is_odd(k):
            if is_odd(k - 1):
                comp_of[k] = comp_of[k - 1]
            else:
                comp_of[k] = len(comps)
                comps.append(k)
    odd_tot = [0] * len(comps)
    for k, ci in comp_of.items():
        odd_tot[ci] = (odd_tot[ci] + cons[k].oddity) % 8
    # trains: scales joined when one of each adjacent pair is odd
    train_of = {lo: 0}
    t = 0
    for k in range(lo, hi):
        if not (is_odd(k) or is_odd(k + 1)):
            t += 1
        train_of[k + 1] = t
    sign = {k: cons[k].sign for k in scales}
    trains: dict[int, list[int]] = {}
    for k in scales:
        trains.setdefault(train_of[k], []).append(k)
    for members in trains.values():
        for j in range(len(members) - 1, 0, -1):
            b, a = members[j], members[j - 1]
            if sign[b] == -1:
                sign[b] = 1
                sign[a] = -sign[a]
                for k in range(a, b):
                    tgt = k + 1 if is_odd(k + 1) else k
                    ci = comp_of[tgt]
                    odd_tot[ci] = (odd_tot[ci] + 4) % 8
    return (tuple((k, cons[k].dim, sign[k], cons[k].odd) for k in scales),
            tuple(zip(comps, odd_tot)))


@lru_cache(maxsize=400000)
def genus_symbol(g: Gram) -> tuple:
    """Complete genus invariant (hashable) of a positive definite integral ternary form."""
    d = disc(g)
    odd = tuple((p, odd_symbol(g, p)) for p in prime_factors(d) if p != 2)
    return (d, odd, two_adic_symbol(g))


def same_genus(g1: Gram, g2: Gram) -> bool:
    return genus_symbol(check_gram(g1)) == genus_symbol(check_gram(g2))


# --- local representation ----------------------------------------------------

def _rep_odd(parts: list[tuple[int, int]], vt: int, tu: int, p: int) -> bool:
    parts = list(parts)
    while True:
        if vt < 0:
            return False
        f0 = [u for s, u in parts if s == 0]
        if vt == 0:
            if len(f0) >= 2:
                return True
            if len(f0) == 1:
                return legendre(tu * f0[0], p) == 1
            return False
        if len(f0) >= 3 or (len(f0) == 2 and legendre(-f0[0] * f0[1], p) == 1):
            return True
        parts = [((s + 2 if s == 0 else s) - 1, u) for s, u in parts]
        vt -= 1


def _prim_rep_2(g: Gram, t: int, k: int) -> bool:
    mod = 1 << k
    n = mod ** 3
    if n > (1 << 24):
        raise ValueError("2-adic search too large")
    r = np.arange(mod, dtype=np.int64)
    x, y, z = (a.ravel() for a in np.meshgrid(r, r, r, indexing="ij"))
    prim = (x % 2 == 1) | (y % 2 == 1) | (z % 2 == 1)
    x, y, z = x[prim], y[prim], z[prim]
    G = [[v % mod for v in row] for row in g]
    gx = [(G[i][0] * x + G[i][1] * y + G[i][2] * z) % mod for i in range(3)]
    q = (x * gx[0] + y * gx[1] + z * gx[2] - t) % mod
    # ord of the gradient 2Gx, via a lookup table (ord 0 := k)
    tbl = np.array([k] + [(c & -c).bit_length() - 1 for c in range(1, mod)], dtype=np.int64)
    gord = np.minimum(np.minimum(tbl[(2 * gx[0]) % mod], tbl[(2 * gx[1]) % mod]), tbl[(2 * gx[2]) % mod])
    need = 2 * gord + 1
    ok = (need <= k) & ((q % np.left_shift(1, np.minimum(need, k))) == 0)
    return bool(ok.any())


def local_represents(g: Gram, p: int, t: int) -> bool:
    """Does the Z_p-lattice G_p represent t?"""
    g = check_gram(g)
    if t == 0:
        return True
    if p != 2:
        parts = [(s, u) for s, _, u in _split(g, p)]
        return _rep_odd(parts, valuation(t, p), unit_part(t, p), p)
    smax = max(s for s, _, _ in _split(g, 2))
    while True:
        v = valuation(t, 2)
        k = min(2 * v + 3, 2 * smax + 3)
        if _prim_rep_2(g, t, k):
            return True
        if t % 4:
            return False
        t //= 4


def genus_represents(g: Gram, t: int) -> bool:
    """t is represented by some lattice in gen(G) (equivalently by G_p for every p)."""
    if t <= 0:
        return t == 0
    ps = set(prime_factors(2 * disc(g) * t))
    return all(local_represents(g, p, t) for p in ps)
