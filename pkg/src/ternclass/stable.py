"""Closed-form label census of the genus of a stable lattice."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd

from .isometry import Label, label
from .lattice import Gram, check_gram, diag, disc, is_even, representation_count, six
from .localdata import genus_represents, is_anisotropic, legendre, prime_factors, two_adic_symbol
from .watson import is_stable, lambda_primitive


class TableGap(ValueError):
    """No row of the local-density table matches; the caller should use the oracle."""


def _nu(n: int) -> int:
    return len(prime_factors(n)) if n > 1 else 0


def split_PQ(k: Gram) -> tuple[int, int]:
    """(P, Q): products of odd primes q | dK with K_q anisotropic, resp. isotropic."""
    k = check_gram(k)
    if not is_stable(k):
        raise ValueError("lattice is not stable")
    P = Q = 1
    for q in prime_factors(disc(k)):
        if q == 2:
            continue
        if is_anisotropic(k, q):
            P *= q
        else:
            Q *= q
    return P, Q


def _leg(a: int, q: int) -> int:
    return legendre(a % q, q)


def phi(P: int, Q: int, *args: int) -> int:
    """Phi_K(alpha) or Phi_K(alpha, beta, gamma) for the anisotropy split (P, Q)."""
    out = 1
    if len(args) == 1:
        (a,) = args
        for q in prime_factors(P):
            out *= 1 - _leg(-a, q)
        for q in prime_factors(Q):
            out *= 1 + _leg(-a, q)
        return out
    # q divides exactly one of a, b, c; the other two span the unimodular part at q,
    # which is isotropic iff (-xy/q) = 1.  So anisotropic primes take the minus sign.
    a, b, c = args
    for q in prime_factors(P):
        out *= (1 - _leg(-b * c, q)) * (1 - _leg(-c * a, q)) * (1 - _leg(-a * b, q))
    for q in prime_factors(Q):
        out *= (1 + _leg(-b * c, q)) * (1 + _leg(-c * a, q)) * (1 + _leg(-a * b, q))
    return out


def _two_isotropic_odd(k: Gram) -> bool:
    return not is_even(k) and not is_anisotropic(k, 2)


def mass(k: Gram) -> Fraction:
    k = check_gram(k)
    P, Q = split_PQ(k)
    if is_even(k):
        eps = Fraction(1, 24)
    elif is_anisotropic(k, 2):
        eps = Fraction(1, 48)
    else:
        eps = Fraction(1, 16)
    out = eps / 2 ** _nu(P * Q)
    for p in prime_factors(P):
        out *= p - 1
    for p in prime_factors(Q):
        out *= p + 1
    return out


# --- lattices with more than four isometries ------------------------------------------

def M1(a: int, b: int, c: int) -> Gram:
    return diag(a, b, c)


def M2(a: int, b: int, c: int) -> Gram:
    return ((a, 0, 0), (0, (b + c) // 2, (b - c) // 2), (0, (b - c) // 2, (b + c) // 2))


def M_plane(b: int) -> Gram:
    """The A_2 plane [[2,1],[1,2]] orthogonal to <b>."""
    return ((2, 1, 0), (1, 2, 0), (0, 0, b))


def _triples(d: int):
    for a in range(1, d + 1):
        if d % a:
            continue
        r = d // a
        for b in range(1, r + 1):
            if r % b == 0:
                yield a, b, r // b


@dataclass
class SpecialOrbits:
    b24: int
    b16: int
    b12: int
    b8: int
    labels: Counter = field(default_factory=Counter)


def special_orbit_counts(k: Gram) -> SpecialOrbits:
    """b_24, b_16, b_12, b_8 with the labels of those classes."""
    k = check_gram(k)
    d = disc(k)
    P, Q = split_PQ(k)
    nu = _nu(P * Q)
    labels: Counter = Counter()
    blocked = _two_isotropic_odd(k)
    e3 = 1 if d % 3 == 0 else 0
    b24 = 0 if blocked else Fraction(e3 * phi(P, Q, 3) * 2, 2 ** nu)
    b12 = 0 if blocked else Fraction((1 - e3) * phi(P, Q, 3), 2 ** nu)
    b16 = Fraction((1 - (d % 2 == 0)) * phi(P, Q, 1), 2 ** nu)
    for name, v in (("b24", b24), ("b12", b12), ("b16", b16)):
        if v not in (0, 1):
            raise ValueError(f"{name} = {v} is not 0 or 1")
    if b24:
        labels[label(M_plane(d // 3))] += 1
    if b12:
        labels[Label(12, (2, 2, 2))] += 1
    if b16:
        labels[Label(16, (1, 1, 2, 2, d))] += 1
    b8 = 0
    for a, b, c in _triples(d):
        grams = []
        if is_even(k):
            if b > c and (b, c) != (3, 1) and a % 4 == 2 and (b * c) % 4 == 3:
                grams.append((phi(P, Q, a, 2 * b, 2 * c), M2(a, b, c)))
        else:
            if a > b > c:
                grams.append((phi(P, Q, a, b, c), M1(a, b, c)))
            if b > c and (b, c) != (3, 1):
                grams.append((phi(P, Q, a, 2 * b, 2 * c), M2(a, b, c)))
        for f, g in grams:
            if f:
                if f != 2 ** nu:
                    raise ValueError(f"Phi = {f} is neither 0 nor 2^nu")
                b8 += 1
                labels[label(g)] += 1
    return SpecialOrbits(int(b24), int(b16), int(b12), b8, labels)


# --- local densities ----------------------------------------------------------------------

@dataclass(frozen=True)
class ImQuadData:
    d_E: int
    h_E: int
    mu_E: int


def _squarefree_part(n: int) -> int:
    out = 1
    for p in prime_factors(n):
        k = 0
        while n % p == 0:
            n //= p
            k += 1
        if k % 2:
            out *= p
    return out


@lru_cache(maxsize=None)
def imquad_class_number(D: int) -> ImQuadData:
    """Class number and unit count of Q(sqrt(D)), D < 0, by counting reduced forms."""
    if D >= 0:
        raise ValueError("D must be negative")
    s = _squarefree_part(-D)
    dE = -s if (-s) % 4 == 1 else -4 * s
    h = 0
    a = 1
    while 3 * a * a <= -dE:
        for b in range(-a + 1, a + 1):
            num = b * b - dE
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a or (c == a and b < 0):
                continue
            if gcd(gcd(a, abs(b)), c) == 1:
                h += 1
        a += 1
    mu = 6 if dE == -3 else 4 if dE == -4 else 2
    return ImQuadData(dE, h, mu)


def t_lookup(lam: Gram, delta: int) -> Fraction:
    """Local-density factor t_{m,delta} from the 2-adic class of lambda_m(K)."""
    d = disc(lam)
    if delta == 2:
        if not is_even(lam):
            return Fraction(1, 2)
        u = (3 * (d // 2)) % 8
        return Fraction({1: 4, 3: 1, 5: 2, 7: 1}[u])
    if is_even(lam):
        raise TableGap("even lattice with delta = 1")
    if d % 4 == 1:
        return Fraction(1, 2)
    sym = two_adic_symbol(lam)
    if d % 8 == 3:
        if sym == two_adic_symbol(diag(1, 1, d)):
            return Fraction(3)
        if sym == two_adic_symbol(diag(3, 3, d)):
            return Fraction(1)
    if d % 8 == 7 and sym == two_adic_symbol(diag(1, 1, d)):
        return Fraction(2)
    raise TableGap(f"no local-density row for disc {d} mod 8 = {d % 8}, delta = 1")


def lambda_m(k: Gram, m: int) -> Gram:
    g = k
    for q in prime_factors(m):
        g = lambda_primitive(g, q).gram
    return g


def _divisors(n: int) -> list[int]:
    return [x for x in range(1, n + 1) if n % x == 0]


@dataclass
class DensityTerm:
    m: int
    delta: int
    t: Fraction
    imquad: ImQuadData
    value: Fraction  # t * 2^(nu(m) - nu(PQ)) * h_E / mu_E


def density_terms(k: Gram) -> list[DensityTerm]:
    P, Q = split_PQ(k)
    nu = _nu(P * Q)
    out = []
    for m in _divisors(P * Q):
        lam = lambda_m(k, m)
        for delta in (1, 2):
            if not genus_represents(lam, delta):
                continue
            t = t_lookup(lam, delta)
            iq = imquad_class_number(-delta * disc(lam))
            val = t * Fraction(2) ** (_nu(m) - nu) * Fraction(iq.h_E, iq.mu_E)
            out.append(DensityTerm(m, delta, t, iq, val))
    return out


def resolve_b4_labels(terms: list[DensityTerm], higher: Counter) -> Counter:
    """Counts of classes labelled <4; delta m>, from the representation-density identity."""
    out: Counter = Counter()
    for term in terms:
        n = term.delta * term.m
        known = sum(Fraction(2 * lab.q_values.count(n) * k, lab.order) for lab, k in higher.items())
        b4 = 2 * (term.value - known)
        if b4.denominator != 1 or b4 < 0:
            raise ValueError(f"count of <4; {n}> classes is {b4}")
        if b4:
            out[Label(4, (n,))] = int(b4)
    return out


def symmetry_count_check(k: Gram, n: int, m: int) -> tuple[int, int]:
    """(#symmetries of K with Q = n, r(delta, lambda_m(K)) / 2), n = delta * m."""
    lab = label(k)
    return lab.q_values.count(n), representation_count(lambda_m(k, m), n // m) // 2


# --- assembly -----------------------------------------------------------------------------

@dataclass
class StableGenusReport:
    gram: Gram
    P: int
    Q: int
    nu: int
    mass: Fraction
    b: dict[int, int]
    labels: Counter
    h: int
    method: str = "formula"
    note: str = ""

    @property
    def label_multiset(self) -> Counter:
        return self.labels

    def to_json(self) -> dict:
        return {
            "schema": 1,
            "input": list(six(self.gram)),
            "P": self.P, "Q": self.Q, "nu": self.nu,
            "mass": f"{self.mass.numerator}/{self.mass.denominator}",
            "b": {str(k): v for k, v in sorted(self.b.items())},
            "h": self.h,
            "labels": [{"label": lab.to_json(), "count": n} for lab, n in sorted(self.labels.items())],
            "method": self.method,
            "note": self.note,
        }


def _formula_report(k: Gram) -> StableGenusReport:
    d = disc(k)
    P, Q = split_PQ(k)
    nu = _nu(P * Q)
    w = mass(k)
    if d == 1:
        labels = Counter({Label(48, (1, 1, 1, 2, 2, 2, 2, 2, 2)): 1})
        return StableGenusReport(k, P, Q, nu, w, {48: 1}, labels, 1, note="gen(I)")
    sp = special_orbit_counts(k)
    terms = density_terms(k)
    h = 2 * w + sum((t.value for t in terms), Fraction(0)) + Fraction(sp.b12 + sp.b24, 3) + Fraction(sp.b16, 4)
    if h.denominator != 1:
        raise ValueError(f"class number {h} not integral")
    h = int(h)
    labels = Counter(sp.labels)
    labels.update(resolve_b4_labels(terms, sp.labels))
    b2 = h - sum(labels.values())
    if b2 < 0:
        raise ValueError("negative count of classes with two isometries")
    if b2:
        labels[Label(2, ())] = b2
    got = sum((Fraction(n, lab.order) for lab, n in labels.items()), Fraction(0))
    if got != w:
        raise ValueError(f"label multiset has mass {got}, expected {w}")
    b: Counter = Counter()
    for lab, n in labels.items():
        b[lab.order] += n
    return StableGenusReport(k, P, Q, nu, w, dict(b), labels, h)


def stable_report(k: Gram, bound: int | None = None, allow_oracle: bool = True) -> StableGenusReport:
    k = check_gram(k)
    try:
        return _formula_report(k)
    except (TableGap, ValueError) as exc:
        if not allow_oracle:
            raise
        from . import oracle
        census = oracle.enumerate_genus(k, oracle.DEFAULT_BOUND if bound is None else bound)
        P, Q = split_PQ(k)
        labels = census.labels()
        b: Counter = Counter()
        for lab, n in labels.items():
            b[lab.order] += n
        return StableGenusReport(k, P, Q, _nu(P * Q), census.mass, dict(b), labels, census.h,
                                 method="oracle", note=str(exc))


def h_stable(k: Gram) -> int:
    return stable_report(k).h


def stable_label_multiset(k: Gram) -> Counter:
    return stable_report(k).labels

