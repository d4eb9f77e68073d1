import random
from fractions import Fraction

import pytest

from ternclass.isometry import label, orthogonal_group
from ternclass.lattice import (A3, I3, J3, K_family, canonical_key, content, diag, disc, is_isometric, scale,
                               unimodular_random)
from ternclass.linalg import columns, congruent, det3, inverse3, matmul
from ternclass.localdata import odd_symbol, prime_factors, valuation
from ternclass.oracle import watson_preimages
from ternclass.watson import (capital_lambda, descend_to_stable, is_stable, lambda_basis, lambda_primitive,
                              two_dual_transport)

from conftest import a_perp


def test_capital_lambda_examples():
    assert canonical_key(capital_lambda(I3, 2)) == canonical_key(A3)
    assert canonical_key(capital_lambda(J3, 2)) == canonical_key(scale(I3, 4))
    assert canonical_key(capital_lambda(diag(1, 1, 9), 3)) == canonical_key(diag(9, 9, 9))


def test_lambda_primitive_examples():
    r = lambda_primitive(K_family(1), 7)
    assert is_isometric(r.gram, K_family(0))[0] and r.scale == 49
    assert is_isometric(lambda_primitive(diag(1, 1, 9), 3).gram, I3)[0]
    g = diag(1, 2, 5)
    assert is_isometric(lambda_primitive(g, 7).gram, g)[0]


def test_stability():
    assert is_stable(diag(1, 1, 3))
    assert not is_stable(diag(1, 1, 9))
    assert is_stable(a_perp(2))
    assert not is_stable(K_family(0))  # d = 24


def test_descent_chains():
    chain = descend_to_stable(K_family(2))
    assert [s.m for s in chain.steps[:2]] == [7, 7]
    assert is_isometric(chain.steps[1].after, K_family(0))[0]
    assert is_stable(chain.terminal)
    assert descend_to_stable(I3).steps == []
    # Lambda_5 of <1,1,25> is 25 I, so the terminal is I
    assert is_isometric(descend_to_stable(diag(1, 1, 25)).terminal, I3)[0]


def test_descent_lowers_valuation():
    for g in (diag(1, 1, 9 * 25), diag(4, 4, 27), K_family(1), diag(1, 8, 8)):
        chain = descend_to_stable(g)
        for st in chain.steps:
            q = 2 if st.m in (2, 4) else st.m
            assert valuation(disc(st.after), q) < valuation(disc(st.before), q)
        assert is_stable(chain.terminal)


def test_lambda_is_local():
    # the index of Lambda_p(L) is a power of p, so nothing changes at q != p
    for g, p in ((diag(1, 3, 25), 5), (K_family(1), 7), (diag(2, 9, 15), 3), (diag(3, 5, 49), 7)):
        n = capital_lambda(g, p)
        for q in prime_factors(disc(g)):
            if q not in (2, p):
                assert odd_symbol(n, q) == odd_symbol(g, q)


def _random_lattice(rng):
    while True:
        a, b, c = rng.randint(1, 12), rng.randint(1, 12), rng.randint(1, 30)
        f, e, h = rng.randint(-a, a), rng.randint(-a, a), rng.randint(-a, a)
        g = ((a, h, e), (h, b, f), (e, f, c))
        if a * b - h * h > 0 and det3(g) > 0 and content(g) == 1:
            return congruent(g, unimodular_random(rng))


def test_lambda_m_involution():
    rng = random.Random(2)
    done = 0
    while done < 100:
        g = _random_lattice(rng)
        ps = [p for p in prime_factors(disc(g)) if p > 2 and valuation(disc(g), p) <= 1]
        if not ps:
            continue
        m = 1
        for p in ps:
            if rng.random() < 0.7:
                m *= p
        if m == 1:
            m = ps[0]
        once = lambda_primitive(g, m).gram
        assert is_isometric(lambda_primitive(once, m).gram, g)[0]
        done += 1


def test_orthogonal_group_carries_over():
    # every isometry of L maps Lambda_p(L) onto itself, so |O(L)| divides |O(Lambda_p(L))|
    for g, p in ((K_family(1), 7), (diag(1, 1, 25), 5), (diag(1, 3, 9), 3), (a_perp(25), 5)):
        b = columns(lambda_basis(g, p))
        binv = inverse3(b)
        for s in orthogonal_group(g):
            coords = matmul(binv, matmul(s, b))
            assert all(Fraction(x).denominator == 1 for r in coords for x in r)
            assert abs(det3(coords)) == 1
        assert label(congruent(g, b)).order % label(g).order == 0


def test_two_dual_transport_recovers_j_fiber():
    for p in (3, 5):
        for mem in watson_preimages(scale(J3, p * p), p):
            L = mem.gram
            if content(L) != 1:
                continue
            e = lambda_primitive(lambda_primitive(L, 2).gram, 2).gram
            es = two_dual_transport(e)
            assert is_isometric(es, L)[0]
            assert label(es).order == label(e).order


def test_two_dual_transport_rejects_bad_input():
    with pytest.raises(ValueError):
        two_dual_transport(diag(1, 1, 8))
