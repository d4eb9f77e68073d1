import pytest
from hypothesis import given, settings, strategies as st

from ternclass.lattice import (A3, I3, J3, HalfIntegralError, InputError, K_family, NotPositiveDefinite,
                               canonical_form, canonical_key, check_gram, diag, disc, from_six, is_isometric,
                               parse_gram, qform, reduce, representation_count, short_vectors, unimodular_random)
from ternclass.linalg import congruent, det3

from conftest import a_perp


def test_discriminants():
    assert (disc(I3), disc(A3), disc(J3)) == (1, 4, 16)


def test_reduce_example():
    g = ((2, 0, -7), (0, 2, -7), (-7, -7, 343))
    r, t = reduce(g)
    assert r == ((2, 0, -1), (0, 2, -1), (-1, -1, 295))
    assert congruent(g, t) == r and abs(det3(t)) == 1


def test_parse_forms():
    assert parse_gram("1 1 1 0 0 0") == I3
    assert parse_gram("[[2,1,0],[1,2,1],[0,1,2]]") == A3
    with pytest.raises(HalfIntegralError):
        parse_gram("2 2 2 1/2 0 0")
    with pytest.raises(NotPositiveDefinite):
        parse_gram("1 1 -1 0 0 0")
    with pytest.raises(InputError):
        parse_gram("1 2 3")
    with pytest.raises(InputError):
        check_gram(((1, 1, 0), (0, 1, 0), (0, 0, 1)))


def test_short_vectors():
    assert len(short_vectors(I3, 1)) == 6
    assert len(short_vectors(A3, 2)) == 12
    assert all(qform(A3, v) == q for v, q in short_vectors(A3, 4))


def test_representation_counts():
    assert representation_count(I3, 1) == 6
    assert representation_count(a_perp(1), 1) == 2
    assert representation_count(diag(1, 1, 3), 3) == 2
    # sum of three squares: r(3) = 8
    assert representation_count(I3, 3) == 8


def test_isometry_examples():
    from ternclass.lattice import K1
    assert is_isometric(K1(4, 3), J3)[0]
    assert not is_isometric(diag(1, 1, 3), a_perp(1))[0]


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6), st.sampled_from([I3, A3, J3, diag(1, 2, 5), K_family(1), from_six(2, 3, 5, 1, 1, 0)]))
def test_canonical_form_invariant(seed, g):
    import random
    t = unimodular_random(random.Random(seed))
    h = congruent(g, t)
    assert canonical_key(h) == canonical_key(g)
    c, u = canonical_form(h)
    assert congruent(h, u) == c
    ok, m = is_isometric(g, h)
    assert ok and congruent(g, m) == h
