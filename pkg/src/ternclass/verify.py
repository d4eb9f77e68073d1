"""Cross-check suites shared by the CLI and the test-suite.

Every check compares a closed-form route against the brute-force oracle (or a stated
closed form) and returns a list of CheckResult rows.
"""

from __future__ import annotations

import time
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

from . import oracle
from .ascent import (FormulaOutOfContract, class_counts, class_number, gamma_of_q, propagate_labels, q_transport,
                     table1_w)
from .isometry import label, symmetries
from .lattice import K_family, content, diag, disc
from .localdata import legendre
from .stable import _formula_report, symmetry_count_check, split_PQ
from .watson import is_stable


@dataclass
class CheckResult:
    name: str
    ok: bool
    detail: str = ""
    seconds: float = 0.0

    def line(self) -> str:
        return f"{'PASS' if self.ok else 'FAIL'}  {self.name}  {self.detail}".rstrip()


def _timed(name, fn) -> CheckResult:
    t0 = time.perf_counter()
    try:
        ok, detail = fn()
    except Exception as exc:  # report, do not crash the suite
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    return CheckResult(name, ok, detail, time.perf_counter() - t0)


# --- closed forms from the worked examples -----------------------------------------------

def cubic_example_h(p: int) -> int:
    """Class number of the genus of <1,1,p^2>, p > 3, in closed form."""
    m1, t2, mt2, t3 = legendre(-1, p), legendre(2, p), legendre(-2, p), legendre(3, p)
    num = p * p + p * (9 + m1) - 3 * m1 + 6 * t2 - 6 * mt2 + 8 * t3 + 32
    return int(Fraction(num, 48))


def k4_example_gram(p: int):
    return ((2, 0, -p), (0, 2, -p), (-p, -p, 7 * p * p))


def k4_example_h(p: int) -> Fraction:
    r = p % 24
    if r in (1, 5, 13, 17):
        num = p * p + 6 * p + 9
    elif r == 7:
        num = p * p + 4 * p + 3
    elif r in (11, 19):
        num = p * p + 6 * p + 11
    elif r == 23:
        num = p * p + 4 * p + 19
    else:
        raise ValueError("p must be > 3")
    return Fraction(num, 16)


def family_counts(n: int) -> dict[int, Fraction]:
    """Per-order class counts of gen(K(n)), n >= 1."""
    a = 7 ** (n - 1)
    g4 = 4 * a - 1
    g2 = 3 * a * a - 2 * a - Fraction(3, 8) * (a * a - 1)
    return {2: g2, 4: g4, 8: 0, 16: 1}


def _order_counts(labels: Counter) -> Counter:
    out: Counter = Counter()
    for lab, k in labels.items():
        out[lab.order] += k
    return out


def suite_examples(primes63=(5, 7, 11, 13), primes64=(5, 7, 11, 13, 17, 19, 23), bound=oracle.DEFAULT_BOUND):
    rows = []
    for p in primes63:
        def run(p=p):
            g = diag(1, 1, p * p)
            h, rep = class_number(g, bound=bound, force_formula=True)
            o = oracle.enumerate_genus(g, bound).h
            want = cubic_example_h(p)
            return h == want == o, f"pipeline {h}, closed form {want}, oracle {o}"
        rows.append(_timed(f"cubic example p={p}", run))
    for p in primes64:
        def run(p=p):
            g = k4_example_gram(p)
            h, rep = class_number(g, bound=bound, force_formula=True)
            o = oracle.enumerate_genus(g, bound).h
            want = k4_example_h(p)
            return h == want == o, f"pipeline {h}, closed form {want}, oracle {o}"
        rows.append(_timed(f"K4 example p={p}", run))
    return rows


def suite_family(ns=(1, 2), bound=oracle.DEFAULT_BOUND):
    rows = []
    for n in ns:
        def run(n=n):
            g = K_family(n)
            h, rep = class_number(g, bound=bound, force_formula=True)
            counts = _order_counts(rep.labels)
            want = family_counts(n)
            ok = all(counts.get(k, 0) == v for k, v in want.items()) and h == sum(want.values())
            if n == 1:
                ok &= Counter({lab: k for lab, k in rep.labels.items() if lab.order == 4}) == Counter(
                    {lab: 1 for lab in (_l4(2), _l4(4), _l4(24))})
                ok &= oracle.enumerate_genus(g, bound).labels() == rep.labels
            ok &= rep.steps[-1].mass == rep.mass
            return ok, f"h {h}, orders {dict(sorted(counts.items()))}"
        rows.append(_timed(f"K(n) family n={n}", run))
    return rows


def _l4(q):
    from .isometry import Label
    return Label(4, (q,))


# --- fibre tables ----------------------------------------------------------------------

def check_fiber_size(inst) -> tuple[bool, str]:
    fib = oracle.gamma_fiber(inst.n_gram, inst.l_gram, inst.p)
    w = table1_w(inst.jordan)
    return fib.size == w, f"fibre size {fib.size}, w {w}"


def check_fixed_points(inst, fib=None) -> tuple[bool, str]:
    """Per-symmetry fixed members and the special member, against the fixed-point table."""
    n, p, j = inst.n_gram, inst.p, inst.jordan
    if label(n).order == 24 and p == 3:
        return True, "p = 3 order 24: handled by the appendix formulas"
    fib = fib or oracle.gamma_fiber(n, inst.l_gram, p)
    try:
        for s in symmetries(n):
            fixed = fib.fixed_by(s.matrix)
            count, special = gamma_of_q(s.q, j)
            if len(fixed) != count:
                return False, f"|Gamma_sigma| {len(fixed)} != {count} (Q={s.q})"
            # a fixed member where sigma is special is unique, and exists iff the table says so
            q_in = [fib.q_in_member(i, s.axis, s.q) for i in fixed]
            non_q = q_transport(j.case_id, False, s.q, p) if s.q % (p * p) == 0 or j.case_id > 2 else None
            n_special = sum(1 for q in q_in if q != non_q)
            if n_special != int(special):
                return False, f"special count {n_special} != {int(special)} (Q={s.q})"
    except FormulaOutOfContract as exc:
        return True, f"out of contract: {exc}"
    return True, ""


def check_class_counts(inst, fib=None) -> tuple[bool, str]:
    n = inst.n_gram
    fib = fib or oracle.gamma_fiber(n, inst.l_gram, inst.p)
    try:
        counts = class_counts(label(n), inst.jordan, disc(n), l_gram=inst.l_gram)
    except FormulaOutOfContract as exc:
        return True, f"out of contract: {exc}"
    ok = {k: v for k, v in counts.h.items() if v} == dict(fib.order_counts())
    return ok, "" if ok else f"class counts {counts.h} != {dict(fib.order_counts())}"


def check_labels(inst, fib=None) -> tuple[bool, str]:
    n = inst.n_gram
    fib = fib or oracle.gamma_fiber(n, inst.l_gram, inst.p)
    try:
        got = propagate_labels(label(n), inst.jordan, disc(n), n_gram=n, l_gram=inst.l_gram)
    except FormulaOutOfContract as exc:
        return True, f"out of contract: {exc}"
    ok = got == fib.labels()
    return ok, "" if ok else f"labels {dict(got)} != {dict(fib.labels())}"


def check_instance(inst) -> tuple[bool, str]:
    """Fibre size, fixed points, class counts and labels on one (N, L, p) step, against the explicit fibre."""
    ok, detail = check_fiber_size(inst)
    if not ok:
        return ok, detail
    fib = oracle.gamma_fiber(inst.n_gram, inst.l_gram, inst.p)
    notes = []
    for check in (check_fixed_points, check_class_counts, check_labels):
        ok, detail = check(inst, fib)
        if not ok:
            return ok, detail
        if detail:
            notes.append(detail)
    return True, notes[0] if notes else ""


def suite_tables(count: int = 60, seed: int = 0):
    from .instances import random_instances
    rows = []
    insts = random_instances(count, seed=seed)
    for inst in insts:
        rows.append(_timed(f"case {inst.case_id} p={inst.p} |O(N)|={label(inst.n_gram).order}",
                           lambda inst=inst: check_instance(inst)))
    return rows


def suite_appendix():
    from .instances import upward_instances
    rows = []
    for inst in upward_instances(3):
        if label(inst.n_gram).order != 24:
            continue
        rows.append(_timed(f"p=3 order 24 case {inst.case_id}", lambda inst=inst: check_instance(inst)))
    return rows


# --- stable genera -------------------------------------------------------------------------

def stable_genera(max_disc: int):
    for d in range(1, max_disc + 1):
        for sym, census in oracle.genera_of_disc(d).items():
            g = census.classes[0].gram
            if content(g) == 1 and is_stable(g):
                yield g, census


def check_stable(g, census) -> tuple[bool, str]:
    rep = _formula_report(g)
    if rep.mass != census.mass:
        return False, f"mass {rep.mass} != {census.mass}"
    if rep.h != census.h:
        return False, f"h {rep.h} != {census.h}"
    if rep.labels != census.labels():
        return False, "label multisets differ"
    oc = census.orders()
    for k in (8, 12, 16, 24):
        if rep.b.get(k, 0) != oc.get(k, 0):
            return False, f"b{k} {rep.b.get(k, 0)} != {oc.get(k, 0)}"
    P, Q = split_PQ(g)
    for m in [x for x in range(1, P * Q + 1) if (P * Q) % x == 0]:
        for delta in (1, 2):
            for rec in census.classes:
                a, b = symmetry_count_check(rec.gram, delta * m, m)
                if a != b:
                    return False, f"symmetry count {a} != r/2 {b} for {delta * m}"
    return True, ""


def suite_stable(max_disc: int = 200):
    rows = []
    for g, census in stable_genera(max_disc):
        rows.append(_timed(f"stable d={disc(g)} {g}", lambda g=g, c=census: check_stable(g, c)))
    return rows


SUITES = {
    "examples": suite_examples,
    "tables": suite_tables,
    "stable": suite_stable,
    "appendix": suite_appendix,
    "family": suite_family,
}
