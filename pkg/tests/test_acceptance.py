"""Acceptance criteria 1-10.

Each test records one PASS/FAIL line; the lines are printed in the terminal summary
(see conftest.py) and by running this file directly.
"""

from __future__ import annotations

import random
import time
from collections import Counter
from fractions import Fraction

import pytest

from ternclass import oracle
from ternclass.ascent import FormulaOutOfContract, class_number, propagate_labels, table1_w
from ternclass.instances import random_instances, upward_instances
from ternclass.isometry import cubic_type, label
from ternclass.lattice import A3, I3, J3, K_family, canonical_key, diag, disc, is_isometric, scale
from ternclass.localdata import jordan_odd, prime_factors, valuation
from ternclass.verify import (check_class_counts, check_fiber_size, check_fixed_points, check_labels, check_stable,
                              cubic_example_h, family_counts, k4_example_gram, k4_example_h, stable_genera)
from ternclass.watson import capital_lambda, descend_to_stable, lambda_primitive

RESULTS: dict[int, str] = {}
CENSUSES: list = []  # every census built here, for the |O| <= 48 check
CHAINS: list = []  # lattices whose descent chains were exercised


def record(n: int, title: str, ok: bool, detail: str = "") -> None:
    RESULTS[n] = f"criterion {n:>2} {'PASS' if ok else 'FAIL'}  {title}  {detail}".rstrip()


def census(g):
    c = oracle.enumerate_genus(g)
    CENSUSES.append(c)
    return c


def _order_counts(labels: Counter) -> Counter:
    out: Counter = Counter()
    for lab, k in labels.items():
        out[lab.order] += k
    return out


# --- 1 -------------------------------------------------------------------------------------

def test_c1_cubic_example():
    rows, ok = [], True
    for p in (5, 7, 11, 13):
        g = diag(1, 1, p * p)
        t0 = time.perf_counter()
        h, _ = class_number(g, force_formula=True)
        secs = time.perf_counter() - t0
        o = census(g).h
        want = cubic_example_h(p)
        CHAINS.append(g)
        good = h == want == o and secs < 60
        ok &= good
        rows.append(f"p={p}:{h}")
    record(1, "<1,1,p^2> class numbers = closed form = oracle", ok, " ".join(rows))
    assert cubic_example_h(5) == 2
    assert ok


# --- 2 -------------------------------------------------------------------------------------

def _k4_corrected(p):
    # the p = 11, 19 mod 24 branch as it must read to be integral
    return Fraction(p * p + 4 * p + 11, 16) if p % 24 in (11, 19) else k4_example_h(p)


def test_c2_k4_example_family():
    stated_ok, agree, off = True, True, []
    for p in (5, 7, 11, 13, 17, 19, 23):
        g = k4_example_gram(p)
        h, _ = class_number(g, force_formula=True)
        o = census(g).h
        CHAINS.append(g)
        agree &= h == o == _k4_corrected(p)
        if h != k4_example_h(p):
            stated_ok = False
            off.append(f"p={p}: h={h}, stated {k4_example_h(p)}")
    detail = "; ".join(off) if off else "all p"
    record(2, "K4 example family = stated formula = oracle", stated_ok and agree, detail)
    # the pipeline and the oracle always agree; only the printed closed form is off
    assert agree
    if not stated_ok:
        pytest.xfail("stated closed form is non-integral for p = 11, 19 mod 24: " + detail)


# --- 3 -------------------------------------------------------------------------------------

def test_c3_family():
    ok, notes = True, []
    for n in (1, 2):
        g = K_family(n)
        h, rep = class_number(g, force_formula=True)
        CHAINS.append(g)
        counts = _order_counts(rep.labels)
        want = family_counts(n)
        good = all(counts.get(k, 0) == v for k, v in want.items()) and h == want[2] + want[4] + want[16]
        # mass: the 2-adic bottom times the fibre sizes of the odd steps
        chain = descend_to_stable(g)
        m = census(K_family(0)).mass
        for st in chain.steps:
            if st.m == 7:
                m *= table1_w(jordan_odd(st.before, 7))
        good &= rep.mass == m
        if n == 1:
            c = census(g)
            good &= c.labels() == rep.labels
            fours = Counter({lab: k for lab, k in rep.labels.items() if lab.order == 4})
            good &= sorted(lab.q_values for lab in fours.elements()) == [(2,), (4,), (24,)]
            good &= (counts[2], counts[8], counts[16]) == (1, 0, 1)
        ok &= good
        notes.append(f"n={n}: h={h}")
    record(3, "K(n) family per-order counts", ok, " ".join(notes))
    assert ok


# --- 4-6 -----------------------------------------------------------------------------------

_INSTANCES: list = []


def instances():
    if not _INSTANCES:
        pool = random_instances(60, seed=0)
        # every |O(N)| = 48 shape and every p = 3, |O(N)| = 24 step
        for p in (3, 5, 7):
            pool += upward_instances(p, [I3, A3, J3])
        pool += [i for i in upward_instances(3) if label(i.n_gram).order == 24]
        _INSTANCES.extend(pool)
    return _INSTANCES


def _run(check, n, title):
    insts = instances()
    bad, ooc = [], 0
    for inst in insts:
        ok, detail = check(inst)
        if not ok:
            bad.append(f"case {inst.case_id} p={inst.p}: {detail}")
        elif detail.startswith("out of contract"):
            ooc += 1
    cases = sorted({i.case_id for i in insts})
    detail = f"{len(insts) - len(bad)}/{len(insts)} instances, cases {cases}"
    if ooc:
        detail += f", {ooc} out of contract (oracle)"
    if bad:
        detail += "; " + bad[0]
    record(n, title, not bad, detail)
    return insts, bad


def test_c4_fiber_sizes():
    insts, bad = _run(check_fiber_size, 4, "fibre size = mass ratio")
    assert len(insts) >= 50 and set(range(1, 9)) <= {i.case_id for i in insts}
    assert not bad


def test_c5_fixed_points():
    _, bad = _run(check_fixed_points, 5, "per-symmetry fixed members and specials")
    assert not bad


def test_c6_class_counts():
    insts, bad = _run(check_class_counts, 6, "per-order fibre class counts")
    assert any(label(i.n_gram).order == 48 for i in insts)
    app = {i.case_id for i in insts if i.p == 3 and label(i.n_gram).order == 24}
    # cases 1 and 6 cannot occur when p = 3 and |O(N)| = 24, since 3 divides d(N)
    assert app == {2, 3, 4, 5, 7, 8}
    assert not bad


# --- 7 -------------------------------------------------------------------------------------

def test_c7_label_propagation():
    lattices = list(CHAINS) or [diag(1, 1, 25), k4_example_gram(7), K_family(2)]
    lattices += [i.l_gram for i in instances()[:60]]
    steps = bad = ooc = 0
    seen = set()
    for g in lattices:
        for st in descend_to_stable(g).steps:
            if st.m % 2 == 0:
                continue
            key = (canonical_key(st.before), st.m)
            if key in seen:
                continue
            seen.add(key)
            lower = oracle.enumerate_genus(st.after)
            j = jordan_odd(st.before, st.m)
            try:
                got: Counter = Counter()
                for c in lower.classes:
                    n = scale(c.gram, st.scale)
                    for lab, k in propagate_labels(c.label.scaled(st.scale), j, disc(n), n_gram=n,
                                                   l_gram=st.before).items():
                        got[lab] += k
            except FormulaOutOfContract:
                ooc += 1
                continue
            up = oracle.constructive_ascend([c.gram for c in lower.classes], st.m, st.before)
            CENSUSES.append(up)
            steps += 1
            bad += got != up.labels()
    # and every single fibre over one N
    fib_bad = sum(not check_labels(inst)[0] for inst in instances())
    detail = f"{steps - bad}/{steps} odd chain steps, {len(instances()) - fib_bad}/{len(instances())} fibres"
    bad += fib_bad
    if ooc:
        detail += f", {ooc} out of contract (oracle)"
    record(7, "propagated labels = constructive ascent", bad == 0 and steps > 0, detail)
    assert bad == 0 and steps > 0


# --- 8 -------------------------------------------------------------------------------------

def test_c8_stable_genera():
    t0 = time.perf_counter()
    n = bad = 0
    first = ""
    parity = Counter()
    for g, c in stable_genera(500):
        CENSUSES.append(c)
        ok, detail = check_stable(g, c)
        n += 1
        parity["even" if all(g[i][i] % 2 == 0 for i in range(3)) else "odd"] += 1
        if not ok:
            bad += 1
            first = first or f"d={disc(g)}: {detail}"
    secs = time.perf_counter() - t0
    ok = bad == 0 and secs < 1800 and parity["odd"] and parity["even"]
    record(8, "stable genera d <= 500", ok, f"{n - bad}/{n} genera ({parity['odd']} odd, {parity['even']} even) "
                                            f"in {secs:.0f}s {first}".rstrip())
    assert ok


# --- 9 -------------------------------------------------------------------------------------

def _random_primitive(rng):
    from ternclass.lattice import content, unimodular_random
    from ternclass.linalg import congruent, det3
    while True:
        a, b, c = rng.randint(1, 15), rng.randint(1, 15), rng.randint(1, 40)
        f, e, h = rng.randint(-a, a), rng.randint(-a, a), rng.randint(-a, a)
        g = ((a, h, e), (h, b, f), (e, f, c))
        if a * b - h * h > 0 and det3(g) > 0 and content(g) == 1:
            return congruent(g, unimodular_random(rng))


def test_c9_watson_algebra():
    rng = random.Random(9)
    inv = 0
    while inv < 100:
        g = _random_primitive(rng)
        ps = [p for p in prime_factors(disc(g)) if p > 2 and valuation(disc(g), p) <= 1]
        if not ps:
            continue
        m = 1
        for p in ps:
            if rng.random() < 0.7:
                m *= p
        m = m if m > 1 else ps[0]
        assert is_isometric(lambda_primitive(lambda_primitive(g, m).gram, m).gram, g)[0], (g, m)
        inv += 1
    exact = canonical_key(capital_lambda(I3, 2)) == canonical_key(A3)
    exact &= canonical_key(capital_lambda(J3, 2)) == canonical_key(scale(I3, 4))
    divides = all(label(i.n_gram).order % label(i.l_gram).order == 0 for i in instances())
    ok = exact and divides
    record(9, "Watson algebra", ok, f"{inv} involutions, Lambda_2(I)=A, Lambda_2(J)=2Z^3, "
                                     f"|O(L)| divides |O(Lambda_p L)| on {len(instances())} instances")
    assert ok


# --- 10 ------------------------------------------------------------------------------------

def test_c10_group_orders():
    pool = list(CENSUSES)
    for d in range(1, 201):
        pool += oracle.genera_of_disc(d).values()
    classes = [c for cen in pool for c in cen.classes]
    big = [c for c in classes if c.order == 48]
    ok = all(c.order <= 48 for c in classes) and all(cubic_type(c.gram) is not None for c in big)
    record(10, "|O| <= 48 and order 48 is cubic", ok, f"{len(classes)} classes, {len(big)} of order 48")
    assert ok


if __name__ == "__main__":
    import sys
    sys.exit(pytest.main([__file__, "-q"]))
