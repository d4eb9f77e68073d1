"""Isometry groups, symmetries (reflections), labels and the small-family catalogue."""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Iterable

from .lattice import (A3, I3, J3, K1, K2, K3, K4, Gram, automorphisms, canonical_key, disc,
                      qform, scale)
from .linalg import Matrix, det3, identity, matmul, unimodular_inverse


@dataclass(frozen=True, order=True)
class Label:
    order: int
    q_values: tuple[int, ...]

    def __str__(self) -> str:
        if not self.q_values:
            return f"<{self.order}>"
        return f"<{self.order}; " + ",".join(str(q) for q in self.q_values) + ">"

    def scaled(self, c) -> "Label":
        return Label(self.order, tuple(sorted(int(q * c) for q in self.q_values)))

    def to_json(self) -> dict:
        return {"order": self.order, "q_values": list(self.q_values)}


@dataclass(frozen=True)
class Symmetry:
    matrix: Matrix
    axis: tuple[int, int, int]
    q: int


def _normalise_axis(v) -> tuple[int, int, int]:
    g = 0
    for x in v:
        g = gcd(g, x)
    v = tuple(x // g for x in v)
    for x in v:
        if x:
            return v if x > 0 else tuple(-y for y in v)
    raise ValueError("zero axis")


def _is_symmetry(s: Matrix) -> bool:
    return det3(s) == -1 and s[0][0] + s[1][1] + s[2][2] == 1 and matmul(s, s) == identity()


def orthogonal_group(g: Gram) -> list[Matrix]:
    return automorphisms(g)


def symmetries(g: Gram, group: list[Matrix] | None = None) -> list[Symmetry]:
    if group is None:
        group = automorphisms(g)
    out = []
    for s in group:
        if _is_symmetry(s):
            # axis spans the image of I - s
            m = [[(1 if i == j else 0) - s[i][j] for j in range(3)] for i in range(3)]
            col = next(tuple(m[i][j] for i in range(3)) for j in range(3) if any(m[i][j] for i in range(3)))
            ax = _normalise_axis(col)
            out.append(Symmetry(s, ax, qform(g, ax)))
    out.sort(key=lambda t: (t.q, t.axis))
    return out


def label(g: Gram) -> Label:
    group = automorphisms(g)
    return Label(len(group), tuple(sorted(s.q for s in symmetries(g, group))))


def _commute(a: Matrix, b: Matrix) -> bool:
    return matmul(a, b) == matmul(b, a)


def orthogonal_systems(g: Gram, syms: list[Symmetry] | None = None) -> list[tuple[Symmetry, Symmetry, Symmetry]]:
    """Triples of pairwise commuting (orthogonal-axis) symmetries."""
    if syms is None:
        syms = symmetries(g)
    out = []
    n = len(syms)
    for i in range(n):
        for j in range(i + 1, n):
            if not _commute(syms[i].matrix, syms[j].matrix):
                continue
            for k in range(j + 1, n):
                if _commute(syms[i].matrix, syms[k].matrix) and _commute(syms[j].matrix, syms[k].matrix):
                    out.append((syms[i], syms[j], syms[k]))
    return out


@dataclass
class SymClass:
    """A conjugacy class of symmetries inside O(N)."""
    members: list[Symmetry]
    central: bool

    @property
    def q(self) -> int:
        return self.members[0].q

    @property
    def size(self) -> int:
        return len(self.members)


def symmetry_classes(g: Gram) -> tuple[list[Matrix], list[SymClass]]:
    group = automorphisms(g)
    syms = symmetries(g, group)
    by_mat = {s.matrix: s for s in syms}
    seen: set = set()
    classes = []
    for s in syms:
        if s.matrix in seen:
            continue
        orbit = set()
        for x in group:
            orbit.add(matmul(matmul(x, s.matrix), unimodular_inverse(x)))
        seen |= orbit
        members = sorted((by_mat[m] for m in orbit), key=lambda t: (t.q, t.axis))
        classes.append(SymClass(members, len(orbit) == 1))
    classes.sort(key=lambda c: (c.size, c.q))
    return group, classes


# --- families ------------------------------------------------------------------

def _imprimitive(g: Gram, c: int) -> Gram:
    return scale(g, c)


def cubic_type(g: Gram) -> tuple[str, int] | None:
    """("I"|"A"|"J", c) when G is c times one of the three order-48 lattices."""
    from .lattice import content, primitive
    key = canonical_key(primitive(g))
    for name, base in (("I", I3), ("A", A3), ("J", J3)):
        if key == canonical_key(base):
            return name, content(g)
    return None


def recognize_family(g: Gram) -> tuple[str, tuple[int, int]] | None:
    """Identify G as some K_i(a, b); returns (name, (a, b)) or None.

    The order-48 lattices come back as their exceptional members: c I = K3(c, c),
    c A = K1(c, 2c), c J = K4(2c, 3c).
    """
    from .lattice import content, primitive
    cube = cubic_type(g)
    if cube is not None:
        name, c = cube
        return {"I": ("K3", (c, c)), "A": ("K1", (c, 2 * c)), "J": ("K4", (2 * c, 3 * c))}[name]
    c = content(g)
    p = primitive(g)
    d = disc(p)
    key = canonical_key(p)
    lab = label(p)
    for fam, cand in _family_candidates(lab, d):
        if canonical_key(cand) == key:
            return fam[0], tuple(x * c for x in fam[1])
    return None


def _family_candidates(lab: Label, d: int):
    vals = sorted(set(lab.q_values))
    if lab.order == 12:
        for v in vals:
            if v % 2 == 0:
                u = v // 2
                num = d + 2 * u ** 3
                if num % (3 * u * u) == 0:
                    w = num // (3 * u * u)
                    yield ("K1", (u, w)), K1(u, w)
    elif lab.order == 24:
        for v in vals:
            if v % 2 == 0:
                u = v // 2
                if d % (3 * u * u) == 0:
                    yield ("K2", (u, d // (3 * u * u))), K2(u, d // (3 * u * u))
    elif lab.order == 16:
        for v in vals:
            if d % (v * v) == 0:
                yield ("K3", (v, d // (v * v))), K3(v, d // (v * v))
            if v % 2 == 0:
                u = v // 2
                if d % (4 * u * u) == 0:
                    yield ("K4", (u, d // (4 * u * u) + u)), K4(u, d // (4 * u * u) + u)


def icbrt(n: int) -> int:
    r = round(n ** (1.0 / 3)) if n > 0 else 0
    while r ** 3 > n:
        r -= 1
    while (r + 1) ** 3 <= n:
        r += 1
    return r


def model_from_label(lab: Label, d: int) -> Gram | None:
    """A Gram in the class determined by (label, discriminant) for orders 12, 16, 24, 48."""
    if lab.order == 48:
        for base, bd in ((I3, 1), (A3, 4), (J3, 16)):
            if d % bd == 0:
                c = icbrt(d // bd)
                if c ** 3 * bd == d and label(scale(base, c)) == lab:
                    return scale(base, c)
        return None
    if lab.order not in (12, 16, 24):
        return None
    for _, cand in _family_candidates(lab, d):
        try:
            if disc(cand) == d and label(cand) == lab:
                return cand
        except ValueError:
            continue
    return None


def label_multiset_str(labels: Iterable[tuple[Label, int]]) -> str:
    return " ".join(f"{lab}x{n}" for lab, n in labels)
