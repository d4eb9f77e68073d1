"""Brute-force ground truth: genus enumeration, explicit fibers, constructive ascent."""

from __future__ import annotations

from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from . import kernels
from .isometry import Label, label
from .lattice import Gram, canonical_key, check_gram, content, disc, from_six, is_even, six
from .linalg import Matrix, columns, congruent, det3, hnf
from .localdata import genus_symbol
from .watson import lambda_basis

DEFAULT_BOUND = 10 ** 5


class BoundExceeded(ValueError):
    pass


@dataclass(frozen=True)
class ClassRecord:
    gram: Gram  # canonical representative
    order: int
    label: Label
    count: int = 1

    def to_json(self) -> dict:
        return {"gram": list(six(self.gram)), "order": self.order, "label": self.label.to_json(),
                "count": self.count}


@dataclass
class GenusCensus:
    classes: list[ClassRecord]

    @property
    def h(self) -> int:
        return len(self.classes)

    @property
    def mass(self) -> Fraction:
        return sum((Fraction(1, c.order) for c in self.classes), Fraction(0))

    def labels(self) -> Counter:
        return Counter(c.label for c in self.classes)

    def orders(self) -> Counter:
        return Counter(c.order for c in self.classes)

    def to_json(self) -> dict:
        m = self.mass
        return {"h": self.h, "mass": f"{m.numerator}/{m.denominator}",
                "classes": [c.to_json() for c in self.classes]}


def _record(key) -> ClassRecord:
    g = from_six(*key)
    lab = label(g)
    return ClassRecord(g, lab.order, lab)


def _census_from_keys(keys) -> GenusCensus:
    return GenusCensus([_record(k) for k in sorted(set(keys))])


def _filter_chunk(args):
    cands, target, cont, even = args
    out = []
    for c in cands:
        g = from_six(*c)
        if gcd(gcd(c[0], c[1]), gcd(gcd(c[2], c[3]), gcd(c[4], c[5]))) != cont:
            continue
        if is_even(g) != even:
            continue
        if genus_symbol(g) == target:
            out.append(canonical_key(g))
    return out


def enumerate_genus(g: Gram, bound: int = DEFAULT_BOUND, threads: int = 1) -> GenusCensus:
    """All classes in gen(G) by exhaustive reduced-form search."""
    g = check_gram(g)
    d = disc(g)
    if d > bound:
        raise BoundExceeded(f"discriminant {d} exceeds bound {bound}")
    target = genus_symbol(g)
    cands = kernels.reduced_candidates(d)
    args = (target, content(g), is_even(g))
    if threads > 1 and len(cands) > 4000:
        n = threads * 4
        chunks = [(cands[i::n],) + args for i in range(n)]
        with ProcessPoolExecutor(max_workers=threads) as ex:
            keys = [k for part in ex.map(_filter_chunk, chunks) for k in part]
    else:
        keys = _filter_chunk((cands,) + args)
    return _census_from_keys(keys)


def genera_of_disc(d: int) -> dict:
    """Partition all classes of determinant d by genus symbol."""
    out: dict = {}
    for c in kernels.reduced_candidates(d):
        g = from_six(*c)
        out.setdefault(genus_symbol(g), set()).add(canonical_key(g))
    return {k: _census_from_keys(v) for k, v in out.items()}


# --- fibers ----------------------------------------------------------------------

def _sublattice_hnfs(m: int):
    """Upper-triangular column HNFs H with m Z^3 <= H Z^3 <= Z^3."""
    divs = [k for k in range(1, m + 1) if m % k == 0]
    for d1 in divs:
        for d2 in divs:
            for d3 in divs:
                for x in range(d1):
                    for y in range(d1):
                        for z in range(d2):
                            h = ((d1, x, y), (0, d2, z), (0, 0, d3))
                            if _contains_m(h, m):
                                yield h


def _contains_m(h: Matrix, m: int) -> bool:
    # m * H^{-1} integral
    from .linalg import adj3
    dt = det3(h)
    return all((m * a) % dt == 0 for row in adj3(h) for a in row)


def _lattice_key(vectors) -> tuple:
    return hnf(vectors)


@dataclass
class FiberMember:
    basis: Matrix  # columns: basis of M in the coordinates of N
    denom: int  # M = basis / denom
    gram: Gram


@dataclass
class FiberCensus:
    n_gram: Gram
    m: int
    members: list[FiberMember]
    classes: list[tuple[ClassRecord, list[int]]] = field(default_factory=list)

    @property
    def size(self) -> int:
        return len(self.members)

    def order_counts(self) -> Counter:
        return Counter(rec.order for rec, _ in self.classes)

    def labels(self) -> Counter:
        return Counter(rec.label for rec, _ in self.classes)

    def fixed_by(self, s: Matrix) -> list[int]:
        """Indices of members with s(M) = M (s acting in N coordinates)."""
        out = []
        for i, mem in enumerate(self.members):
            cols = [tuple(mem.basis[r][c] for r in range(3)) for c in range(3)]
            img = [tuple(sum(s[r][k] * v[k] for k in range(3)) for r in range(3)) for v in cols]
            if _lattice_key(img) == _lattice_key(cols):
                out.append(i)
        return out

    def q_in_member(self, i: int, axis, q_n: int) -> int:
        """Q_M of the primitive vector of M on the line of axis (given in N coordinates)."""
        from .linalg import adj3
        h = self.members[i].basis
        dt = det3(h)
        y = [sum(r[k] * axis[k] for k in range(3)) for r in adj3(h)]
        if all(v % dt == 0 for v in y):
            return q_n // (self.m * self.m)
        return q_n

    def to_json(self) -> dict:
        return {"N": list(six(self.n_gram)), "m": self.m, "size": self.size,
                "classes": [dict(rec.to_json(), members=len(ix)) for rec, ix in self.classes]}


def watson_preimages(n_gram: Gram, m: int, disc_filter: int | None = None) -> list[FiberMember]:
    """All M with N <= M <= N/m and Lambda_m(M) = N (N given by its full Gram)."""
    n_gram = check_gram(n_gram)
    members = []
    for h in _sublattice_hnfs(m):
        big = congruent(n_gram, h)
        if any(x % (m * m) for r in big for x in r):
            continue
        gm = tuple(tuple(x // (m * m) for x in r) for r in big)
        if disc_filter is not None and disc(gm) != disc_filter:
            continue
        lb = lambda_basis(gm, m)
        # Lambda_m(M) in N coordinates: H v / m
        ok = True
        vecs = []
        for v in lb:
            w = [sum(h[r][k] * v[k] for k in range(3)) for r in range(3)]
            if any(x % m for x in w):
                ok = False
                break
            vecs.append(tuple(x // m for x in w))
        if ok and abs(det3(vecs)) == 1:
            members.append(FiberMember(h, m, gm))
    return members


def gamma_fiber(n_gram: Gram, l_gram: Gram, m: int) -> FiberCensus:
    """All M in gen(L) with Lambda_m(M) = N, where N <= M <= N/m."""
    n_gram = check_gram(n_gram)
    target = genus_symbol(check_gram(l_gram))
    members = [mem for mem in watson_preimages(n_gram, m, disc(l_gram)) if genus_symbol(mem.gram) == target]
    fib = FiberCensus(n_gram, m, members)
    groups: dict = {}
    for i, mem in enumerate(members):
        groups.setdefault(canonical_key(mem.gram), []).append(i)
    fib.classes = [(_record(k), ix) for k, ix in sorted(groups.items())]
    return fib


def constructive_ascend(lower: list[Gram], m: int, l_gram: Gram) -> GenusCensus:
    """Census of gen(L) from a complete census of gen(lambda_m(L))."""
    l_gram = check_gram(l_gram)
    big = congruent(l_gram, columns(lambda_basis(l_gram, m)))
    c = content(big)
    keys = set()
    for n in lower:
        nn = tuple(tuple(x * c for x in r) for r in n)
        for mem in gamma_fiber(nn, l_gram, m).members:
            keys.add(canonical_key(mem.gram))
    return _census_from_keys(keys)


def mass_check(census: GenusCensus, expected: Fraction) -> bool:
    return census.mass == expected
