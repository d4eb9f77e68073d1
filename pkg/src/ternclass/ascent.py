"""Formula ascent through an odd Watson step.

Given N = Lambda_p(L) (as a label) and the Jordan data of L_p, compute the fiber size w,
the fixed-point counts |Gamma_sigma|, the class counts h_2d and the multiset of labels of
the classes lying over N.  class_number() chains these steps on top of a stable genus.
"""

from __future__ import annotations

import time
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction

from .isometry import Label, cubic_type, label, model_from_label, orthogonal_systems, recognize_family, symmetry_classes
from .lattice import K1, K2, Gram, check_gram, disc
from .localdata import JordanDecompOdd, genus_symbol, jordan_odd, legendre, unit_part, valuation
from .watson import DescentChain, descend_to_stable


class FormulaOutOfContract(ValueError):
    """The closed formulas do not cover this step (or failed a consistency check)."""


# --- fibre sizes, fixed points, Q transport -------------------------------------

def table1_w(j: JordanDecompOdd) -> int:
    """|Gamma_p^L(N)| = mass(L) / mass(Lambda_p(L))."""
    p, c = j.p, j.case_id
    return {
        1: lambda: p * (p + j.e(1, 2)) // 2,
        2: lambda: p * p,
        3: lambda: 1,
        4: lambda: (p - j.e(1, 3)) // 2,
        5: lambda: p,
        6: lambda: p * (p + j.e(2, 3)) // 2,
        7: lambda: p * (p - j.e(1, 2)) // 2,
        8: lambda: p * p,
    }[c]()


def _same_class(u: int, eps: int, p: int) -> bool:
    return legendre(u * eps, p) == 1


def gamma_sigma_count(case_id: int, v: int, u: int, j: JordanDecompOdd) -> tuple[int, bool]:
    """(|Gamma_sigma|, has_special) for a symmetry with Q_N(sigma) = p^v * u, u a p-unit."""
    p = j.p
    e1, e3 = j.units[0], j.units[2]
    if case_id == 1 and v == 2:
        if _same_class(u, e3, p):
            return (p - j.e(1, 2)) // 2 + 1, True
        return (p + j.e(1, 2)) // 2, False
    if case_id == 2:
        if v >= 3:
            return 1, True
        if v == 2:
            return p, False
    if case_id == 3:
        if v == 2 and _same_class(u, e1, p):
            return 1, True
        if v == 1:
            return 1, False
    if case_id == 4:
        if v == 2:
            if _same_class(u, e1, p):
                return j.eta(1, 3) + 1, True
            return j.eta_prime(1, 3), False
        if v == 1:
            return (p - j.e(1, 3)) // 2, False
    if case_id == 5:
        if v >= 3:
            return 1, False
        if v == 2:
            return 1, True
        if v == 1:
            return p, False
    if case_id == 6 and v == 2:
        if _same_class(u, e1, p):
            return (p - j.e(2, 3)) // 2 + 1, True
        return (p + j.e(2, 3)) // 2, False
    if case_id == 7:
        if v >= 3:
            return (p - j.e(1, 2)) // 2, False
        if v == 2:
            if _same_class(u, e1, p):
                return p * j.eta(1, 2) + 1, True
            return p * j.eta_prime(1, 2), False
    if case_id == 8:
        if v >= 3:
            return p, False
        if v == 2:
            return 1, True
    raise FormulaOutOfContract(f"no fixed-point row for case {case_id}, ord {v}")


def gamma_of_q(q: int, j: JordanDecompOdd) -> tuple[int, bool]:
    return gamma_sigma_count(j.case_id, valuation(q, j.p), unit_part(q, j.p), j)


def s_value(q_values, j: JordanDecompOdd) -> int:
    """Number of symmetries of N that are special to some lattice over N."""
    if j.alpha == 0:
        t, eps = j.beta, j.units[2]
    else:
        t, eps = 2, j.units[0]
    p = j.p
    return sum(1 for q in q_values if valuation(q, p) == t and _same_class(unit_part(q, p), eps, p))


def q_transport(case_id: int, special: bool, q_n: int, p: int) -> int:
    """Q_M(sigma) from Q_N(sigma)."""
    down = (case_id in (1, 2)) != special
    if not down:
        return q_n
    if q_n % (p * p):
        raise FormulaOutOfContract(f"Q_N = {q_n} not divisible by p^2")
    return q_n // (p * p)


# --- per-order class counts ------------------------------------------------------

@dataclass
class FiberCounts:
    w: int
    f: int
    s: int
    h: dict[int, int] = field(default_factory=dict)

    @property
    def classes(self) -> int:
        return sum(self.h.values())

    def to_json(self) -> dict:
        return {"w": self.w, "f": self.f, "s": self.s, "h": {str(k): v for k, v in sorted(self.h.items())}}


def _div(num: int, den: int) -> int:
    if num % den or num < 0:
        raise FormulaOutOfContract(f"class-count numerator {num} not a nonnegative multiple of {den}")
    return num // den


def _table3(order: int, w: int, f: int, s: int) -> dict[int, int]:
    if order == 2:
        return {2: w}
    if order == 4:
        return {2: _div(w - f, 2), 4: f}
    if order == 8:
        return {2: _div(w - f + 2 * s, 4), 4: _div(f - 3 * s, 2), 8: _div(s, 1)}
    if order == 12:
        r = w % 3
        return {2: _div(w - f + 2 * r, 6), 4: _div(f - 3 * r, 3), 12: r}
    if order == 16:
        r = w % 2
        return {2: _div(w - f + 2 * s + 2 * r, 8), 4: _div(f - 3 * s - 2 * r, 4), 8: _div(s - r, 2), 16: r}
    if order == 24:
        r = w % 3
        return {2: _div(w - f + 2 * s + 4 * r, 12), 4: _div(f - 3 * s - 4 * r, 6), 8: _div(s - r, 3), 24: r}
    raise FormulaOutOfContract(f"no class-count row for |O(N)| = {order}")


def _table3_48(w: int, f: int, s: int, j: JordanDecompOdd) -> dict[int, int]:
    p = j.p
    d0 = j.unimodular_disc()
    h16 = (1 + legendre(d0, p)) // 2
    h12 = 0 if p == 3 else (1 + legendre(3 * d0, p)) // 2
    h8 = _div(s - 3 * h16, 6)
    h4 = _div(f - 18 * h8 - 12 * h12 - 15 * h16, 12)
    h2 = _div(w - f + 12 * h8 + 8 * h12 + 12 * h16, 24)
    return {2: h2, 4: h4, 8: h8, 12: h12, 16: h16}


# --- symmetry structure of N, read off its label ------------------------------------

@dataclass
class _Cls:
    q: int
    size: int
    central: bool
    partners: tuple[int, int] | None = None  # Q of the other two members of an orthogonal system


def _n_model(n_label: Label, n_disc: int) -> Gram:
    g = model_from_label(n_label, n_disc)
    if g is None:
        raise FormulaOutOfContract(f"cannot rebuild a lattice with label {n_label}")
    return g


def _structure(n_label: Label, n_disc: int) -> list[_Cls]:
    if n_label.order <= 8:
        qs = n_label.q_values
        out = [_Cls(q, 1, True) for q in qs]
        if n_label.order == 8:
            for i, c in enumerate(out):
                c.partners = tuple(q for k, q in enumerate(qs) if k != i)
        return out
    g = _n_model(n_label, n_disc)
    group, classes = symmetry_classes(g)
    systems = orthogonal_systems(g)
    out = []
    for sc in classes:
        rep = sc.members[0]
        partners = None
        for sysm in systems:
            if any(s.matrix == rep.matrix for s in sysm):
                partners = tuple(s.q for s in sysm if s.matrix != rep.matrix)
                break
        out.append(_Cls(rep.q, sc.size, sc.central, partners))
    return out


# --- propagation --------------------------------------------------------------------

def _lab(order: int, qs) -> Label:
    return Label(order, tuple(sorted(qs)))


def _explicit_fiber_labels(n_gram: Gram, l_gram: Gram, p: int) -> Counter:
    from .oracle import gamma_fiber
    return gamma_fiber(n_gram, l_gram, p).labels()


def _in_genus(g: Gram, l_gram: Gram) -> bool:
    try:
        g = check_gram(g)
    except ValueError:
        return False
    return disc(g) == disc(l_gram) and genus_symbol(g) == genus_symbol(check_gram(l_gram))


def _appendix(n_label: Label, n_disc: int, j: JordanDecompOdd, l_gram: Gram) -> Counter:
    """p = 3 and |O(N)| = 24, N = K_2(a, b)."""
    if l_gram is None:
        raise FormulaOutOfContract("the p = 3 order-24 branch needs a lattice in gen(L)")
    fam = recognize_family(_n_model(n_label, n_disc))
    if fam is None or fam[0] != "K2":
        raise FormulaOutOfContract("order-24 lattice not of shape K_2(a, b)")
    a, b = fam[1]
    case = j.case_id
    va, vb = valuation(a, 3), valuation(b, 3)
    shape = {2: va == 2 and vb == 2, 5: va == 1 and vb >= 3, 7: va == 2 and vb == 2, 8: va == 2 and vb >= 3}
    if not shape.get(case, True):
        raise FormulaOutOfContract(f"K_2({a}, {b}) has 3-orders ({va}, {vb}), outside the p = 3 case-{case} shape")
    out: Counter = Counter()

    def explicit(g):
        if not _in_genus(g, l_gram):
            raise FormulaOutOfContract(f"expected {g} in gen(L)")
        out[label(g)] += 1

    def k2_small_a():
        return K2(a // 3, b)

    def k2_small_b():
        return K2(a, b // 9)

    def k1():
        if (6 * a + b) % 9:
            raise FormulaOutOfContract("K_1 candidate not integral")
        return K1(a, (6 * a + b) // 9)

    def k2_in_genus(which):
        if which == "a" and a % 3 == 0:
            return _in_genus(k2_small_a(), l_gram)
        if which == "b" and b % 9 == 0:
            return _in_genus(k2_small_b(), l_gram)
        return False

    if case == 2:
        out[_lab(8, (b // 9, 2 * a // 9, 6 * a))] += 1
        out[_lab(4, (2 * a // 9,))] += 1
    elif case == 3 or (case == 4 and j.e(1, 3) == 1):
        hits = [g for w_, g in (("a", k2_small_a), ("b", k2_small_b)) if k2_in_genus(w_)]
        if len(hits) != 1:
            raise FormulaOutOfContract("order-24 candidate not unique")
        explicit(hits[0]())
    elif case == 4:
        eps1 = j.units[0]
        if b % 9 == 0 and legendre(unit_part(b // 9, 3) * eps1, 3) == 1:
            explicit(k2_small_a())
            explicit(k2_small_b())
        else:
            explicit(k1())
    elif case == 5:
        explicit(k2_small_a())
        explicit(k1())
    elif case == 7:
        w = table1_w(j)
        has = k2_in_genus("b")
        if has:
            explicit(k1())
            explicit(k2_small_b())
        if w == 6 and not has:
            out[_lab(4, (6 * a,))] += 1
        elif w == 6 or not has:
            # the order-8 class: its special symmetry is the one with Q_N / 9 in the class of eps_1
            eps1 = j.units[0]
            cands = [q for q in (2 * a, b) if legendre(unit_part(q, 3) * eps1, 3) == 1]
            if len(cands) != 1:
                raise FormulaOutOfContract("order-8 label over K_2(a, b) not determined by local data")
            sp = cands[0]
            other = b if sp == 2 * a else 2 * a
            out[_lab(8, (sp // 9, other, 6 * a))] += 1
    elif case == 8:
        out[_lab(8, (2 * a // 9, 6 * a, b))] += 1
        out[_lab(4, (6 * a,))] += 1
    else:
        raise FormulaOutOfContract(f"case {case} cannot occur for p = 3, |O(N)| = 24")
    return out


def _need(x: int, what: str) -> int:
    if x < 0:
        raise FormulaOutOfContract(f"negative count for {what}")
    return x


def _half(num: int, den: int, what: str) -> int:
    if num % den or num < 0:
        raise FormulaOutOfContract(f"non-integral count for {what}")
    return num // den


def propagate_labels(n_label: Label, j: JordanDecompOdd, n_disc: int, n_gram: Gram | None = None,
                     l_gram: Gram | None = None) -> Counter:
    """Labels of the classes in Gamma_p^L(N), N = Lambda_p(L) given by its (unscaled) label."""
    p, case = j.p, j.case_id
    if j.exponents[0] != 0:
        raise FormulaOutOfContract("L_p has no unimodular component")
    order = n_label.order
    w = table1_w(j)
    if order == 24 and p == 3:
        out = _appendix(n_label, n_disc, j, l_gram)
        _check_orbit_sum(out, order, w)
        return out
    if order == 48:
        g = n_gram if n_gram is not None else _n_model(n_label, n_disc)
        cube = cubic_type(g)
        if cube is None or cube[0] != "I":
            # p A / p J: explicit fiber (the O-preserving bijections with the p I fiber)
            if l_gram is None:
                raise FormulaOutOfContract("order-48 N not similar to I needs a lattice in gen(L)")
            out = _explicit_fiber_labels(g, l_gram, p)
            _check_orbit_sum(out, order, w)
            return out
    structure = _structure(n_label, n_disc)
    gam = {c.q: gamma_of_q(c.q, j) for c in structure}
    T = lambda q, sp: q_transport(case, sp, q, p)  # noqa: E731
    out: Counter = Counter()

    if order == 2:
        out[Label(2, ())] = w
    elif order == 4:
        (c,) = structure
        n, sp = gam[c.q]
        if sp:
            out[_lab(4, (T(c.q, True),))] += 1
        if n - sp:
            out[_lab(4, (T(c.q, False),))] += n - sp
        out[Label(2, ())] += _half(w - n, 2, "h2")
    elif order == 8:
        h8 = 0
        for c in structure:
            n, sp = gam[c.q]
            if sp:
                h8 += 1
                out[_lab(8, (T(c.q, True),) + tuple(T(q, False) for q in c.partners))] += 1
        for c in structure:
            n, _ = gam[c.q]
            h4 = _half(n - h8, 2, "h4(sigma)")
            if h4:
                out[_lab(4, (T(c.q, False),))] += h4
    elif order == 12:
        h12 = w % 3
        if h12:
            out[_lab(12, tuple(T(q, False) for q in n_label.q_values))] += 1
        for c in structure:
            n, sp = gam[c.q]
            h4 = _need(n - h12, "h4(sigma)")
            if sp and h4:
                out[_lab(4, (T(c.q, True),))] += 1
                h4 -= 1
            if h4:
                out[_lab(4, (T(c.q, False),))] += h4
    elif order == 16:
        tau = next(c for c in structure if c.central)
        h16 = w % 2
        if h16:
            out[_lab(16, (T(tau.q, True),) + tuple(T(q, False) for q in n_label.q_values if q != tau.q)
                     + (T(tau.q, False),) * (n_label.q_values.count(tau.q) - 1))] += 1
        h8 = 0
        others = [c for c in structure if not c.central]
        for c in others:
            if gam[c.q][1]:
                h8 += 1
                out[_lab(8, (T(c.q, True),) + tuple(T(q, False) for q in c.partners))] += 1
        for c in others:
            n, sp = gam[c.q]
            h4 = _half(n - 2 * int(sp) - h16, 2, "h4(sigma)")
            if h4:
                out[_lab(4, (T(c.q, False),))] += h4
        h4t = _half(gam[tau.q][0] - 2 * h8 - h16, 4, "h4(tau)")
        if h4t:
            out[_lab(4, (T(tau.q, False),))] += h4t
    elif order == 24:
        tau = next(c for c in structure if c.central)
        h24 = w % 3
        if h24:
            qs = list(n_label.q_values)
            qs.remove(tau.q)
            out[_lab(24, (T(tau.q, True),) + tuple(T(q, False) for q in qs))] += 1
        h8 = 0
        others = [c for c in structure if not c.central]
        for c in others:
            if gam[c.q][1]:
                h8 += 1
                out[_lab(8, (T(c.q, True),) + tuple(T(q, False) for q in c.partners))] += 1
        for c in others:
            n, _ = gam[c.q]
            h4 = _half(n - h8 - h24, 2, "h4(sigma)")
            if h4:
                out[_lab(4, (T(c.q, False),))] += h4
        h4t = _half(gam[tau.q][0] - 3 * h8 - h24, 6, "h4(tau)")
        if h4t:
            out[_lab(4, (T(tau.q, False),))] += h4t
    elif order == 48:
        out = _propagate_48(structure, gam, j, T, w)
    else:
        raise FormulaOutOfContract(f"unexpected |O(N)| = {order}")

    # h2 from the orbit equation sum |O(N)| / |O(M)| = w
    if order > 4:
        rest = w - sum(order // lab.order * k for lab, k in out.items())
        h2 = _half(rest, order // 2, "h2")
        if h2:
            out[Label(2, ())] += h2
    _check_orbit_sum(out, order, w)
    counts = class_counts(n_label, j, n_disc, l_gram=l_gram)
    got = Counter()
    for lab, k in out.items():
        got[lab.order] += k
    if any(got.get(k, 0) != v for k, v in counts.h.items()) or sum(got.values()) != counts.classes:
        raise FormulaOutOfContract("label propagation disagrees with the class-count table")
    return +out


def _propagate_48(structure, gam, j: JordanDecompOdd, T, w: int) -> Counter:
    """N = c I: Type I axes x_i (Q = c), Type II axes x_i +- x_j (Q = 2c)."""
    p = j.p
    t1 = min(structure, key=lambda c: c.q)
    t2 = max(structure, key=lambda c: c.q)
    counts = _table3_48(w, _f_of(structure, gam), s_value_structure(structure, j), j)
    h8, h12, h16 = counts[8], counts[12], counts[16]
    p2 = p * p
    out: Counter = Counter()
    if j.case_id == 1:
        lab12, lab16, lab8 = _lab(12, (2, 2, 2)), _lab(16, (1, 1, 2, 2, p2)), _lab(8, (1, 2, 2 * p2))
    elif j.case_id == 6:
        lab12 = _lab(12, (2 * p2,) * 3)
        lab16 = _lab(16, (1, p2, p2, 2 * p2, 2 * p2))
        lab8 = _lab(8, (2, p2, 2 * p2))
    else:
        raise FormulaOutOfContract(f"order-48 N cannot arise in case {j.case_id}")
    if h12:
        out[lab12] += h12
    if h16:
        out[lab16] += h16
    if h8:
        out[lab8] += h8
    h4a = _half(gam[t1.q][0] - 2 * h8 - 3 * h16, 4, "h4(type I)")
    h4b = _half(gam[t2.q][0] - 2 * h8 - 2 * h12 - h16, 2, "h4(type II)")
    if h4a:
        out[_lab(4, (T(t1.q, False),))] += h4a
    if h4b:
        out[_lab(4, (T(t2.q, False),))] += h4b
    if h4a + h4b != counts[4]:
        raise FormulaOutOfContract("order-48 h4 split disagrees with the total")
    return out


def _f_of(structure, gam) -> int:
    return sum(c.size * gam[c.q][0] for c in structure)


def s_value_structure(structure, j: JordanDecompOdd) -> int:
    return s_value([c.q for c in structure for _ in range(c.size)], j)


def _check_orbit_sum(out: Counter, order: int, w: int) -> None:
    tot = sum(Fraction(order, lab.order) * k for lab, k in out.items())
    if tot != w:
        raise FormulaOutOfContract(f"orbit sum {tot} != fiber size {w}")


def class_counts(n_label: Label, j: JordanDecompOdd, n_disc: int, l_gram: Gram | None = None) -> FiberCounts:
    """w, f, s and h_2d(N) for the fiber over N."""
    w = table1_w(j)
    order = n_label.order
    if order == 24 and j.p == 3:
        labs = _appendix(n_label, n_disc, j, l_gram)
        h: dict[int, int] = {}
        for lab, k in labs.items():
            h[lab.order] = h.get(lab.order, 0) + k
        f = sum(gamma_of_q(q, j)[0] for q in n_label.q_values if _gamma_defined(q, j))
        return FiberCounts(w, f, s_value(n_label.q_values, j), h)
    if order <= 8:
        gams = [gamma_of_q(q, j) for q in n_label.q_values]
        f = sum(n for n, _ in gams)
        s = sum(1 for _, sp in gams if sp)
    else:
        structure = _structure(n_label, n_disc)
        gam = {c.q: gamma_of_q(c.q, j) for c in structure}
        f = _f_of(structure, gam)
        s = sum(c.size for c in structure if gam[c.q][1])
    if order % 8 == 0:
        s2 = s_value(n_label.q_values, j)
        if s2 != s:
            raise FormulaOutOfContract(f"s from fixed points ({s}) != s from Jordan data ({s2})")
    if order == 48:
        h = _table3_48(w, f, s, j)
    else:
        h = _table3(order, w, f, s)
    return FiberCounts(w, f, s, {k: v for k, v in h.items() if v})


def _gamma_defined(q: int, j: JordanDecompOdd) -> bool:
    try:
        gamma_of_q(q, j)
        return True
    except FormulaOutOfContract:
        return False


# --- pipeline ------------------------------------------------------------------------

@dataclass
class StepReport:
    m: int
    method: str  # "formula" | "oracle" | "stable-formula" | "oracle-census"
    h: int
    mass: Fraction
    note: str = ""
    seconds: float = 0.0

    def to_json(self) -> dict:
        return {"m": self.m, "method": self.method, "h": self.h,
                "mass": f"{self.mass.numerator}/{self.mass.denominator}", "note": self.note,
                "seconds": round(self.seconds, 4)}


@dataclass
class ClassNumberReport:
    gram: Gram
    chain: DescentChain
    steps: list[StepReport]
    labels: Counter
    notes: list[str] = field(default_factory=list)

    @property
    def h(self) -> int:
        return sum(self.labels.values())

    @property
    def mass(self) -> Fraction:
        return _mass(self.labels)

    def to_json(self) -> dict:
        from .lattice import six
        m = self.mass
        return {
            "schema": 1,
            "input": list(six(self.gram)),
            "descent": self.chain.to_json(),
            "steps": [s.to_json() for s in self.steps],
            "h": self.h,
            "mass": f"{m.numerator}/{m.denominator}",
            "labels": [{"label": lab.to_json(), "count": k} for lab, k in sorted(self.labels.items())],
            "notes": self.notes,
        }


def _mass(labels: Counter) -> Fraction:
    return sum((Fraction(k, lab.order) for lab, k in labels.items()), Fraction(0))


def _census_labels(census) -> Counter:
    return Counter(c.label for c in census.classes)


def class_number(g: Gram, bound: int | None = None, force_oracle: bool = False, force_formula: bool = False,
                 threads: int = 1) -> tuple[int, ClassNumberReport]:
    """h(gen(G)) by descent to a stable lattice and ascent; scaled inputs are made primitive."""
    from . import oracle, stable
    bound = oracle.DEFAULT_BOUND if bound is None else bound
    g = check_gram(g)
    chain = descend_to_stable(g)
    steps = chain.steps
    odd = [s for s in steps if s.m % 2]
    even = [s for s in steps if s.m % 2 == 0]
    if any(s.m % 2 for s in steps[len(odd):]):
        raise AssertionError("odd step below a 2-adic step")
    reports: list[StepReport] = []
    notes: list[str] = []
    base = odd[-1].after if odd else chain.start
    if force_oracle:
        t0 = time.perf_counter()
        census = oracle.enumerate_genus(chain.start, bound, threads)
        labels = _census_labels(census)
        reports.append(StepReport(0, "oracle-census", census.h, census.mass, "whole genus", time.perf_counter() - t0))
        return census.h, ClassNumberReport(chain.start, chain, reports, labels, ["forced oracle"])

    t0 = time.perf_counter()
    grams = None
    if even:
        # no closed formulas at 2: census at the top of the 2-adic part
        if disc(base) <= bound:
            census = oracle.enumerate_genus(base, bound, threads)
            reports.append(StepReport(2, "oracle-census", census.h, census.mass,
                                      "2-adic part enumerated directly", time.perf_counter() - t0))
        else:
            census = oracle.enumerate_genus(chain.terminal, bound, threads)
            for st in reversed(even):
                census = oracle.constructive_ascend([c.gram for c in census.classes], st.m, st.before)
            reports.append(StepReport(2, "oracle", census.h, census.mass,
                                      "constructive ascent through 2-adic steps", time.perf_counter() - t0))
        labels = _census_labels(census)
        grams = [c.gram for c in census.classes]
    else:
        rep = stable.stable_report(chain.terminal)
        labels = rep.labels
        reports.append(StepReport(1, "stable-formula" if rep.method == "formula" else "oracle-census",
                                  rep.h, rep.mass, rep.note, time.perf_counter() - t0))
    for st in reversed(odd):
        t0 = time.perf_counter()
        j = jordan_odd(st.before, st.m)
        w = table1_w(j)
        try:
            new: Counter = Counter()
            for lab, k in labels.items():
                n_lab = lab.scaled(st.scale)
                n_disc = disc(st.after) * st.scale ** 3
                part = propagate_labels(n_lab, j, n_disc, l_gram=st.before)
                for lab2, k2 in part.items():
                    new[lab2] += k * k2
            if _mass(new) != _mass(labels) * w:
                raise FormulaOutOfContract("mass ratio differs from the fiber size")
            method, note = "formula", f"case {j.case_id}, w = {w}"
            grams = None
        except FormulaOutOfContract as exc:
            if force_formula:
                raise
            notes.append(f"step p={st.m}: {exc}; oracle used")
            if disc(st.before) <= bound:
                census = oracle.enumerate_genus(st.before, bound, threads)
            elif grams is not None:
                census = oracle.constructive_ascend(grams, st.m, st.before)
            else:
                lower = oracle.enumerate_genus(st.after, bound, threads)
                census = oracle.constructive_ascend([c.gram for c in lower.classes], st.m, st.before)
            new = _census_labels(census)
            grams = [c.gram for c in census.classes]
            method, note = "oracle", str(exc)
        labels = new
        reports.append(StepReport(st.m, method, sum(labels.values()), _mass(labels), note,
                                  time.perf_counter() - t0))
    report = ClassNumberReport(chain.start, chain, reports, +labels, notes)
    return report.h, report
