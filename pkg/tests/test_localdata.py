import random

from ternclass.lattice import I3, K_family, diag
from ternclass.localdata import (genus_represents, hasse_invariant, hilbert_symbol, is_anisotropic, jordan_odd,
                                 legendre, local_represents, prime_factors, same_genus)

from conftest import a_perp


def test_legendre_and_hilbert():
    assert legendre(2, 7) == 1
    assert legendre(-1, 5) == 1
    assert hilbert_symbol(-1, -1, -1) == -1
    assert hilbert_symbol(-1, -1, 2) == -1


def test_hilbert_reciprocity():
    rng = random.Random(7)
    for _ in range(200):
        a = rng.choice([-1, 1]) * rng.randint(1, 500)
        b = rng.choice([-1, 1]) * rng.randint(1, 500)
        places = set(prime_factors(abs(a)) + prime_factors(abs(b)) + [2])
        prod = hilbert_symbol(a, b, -1)
        for p in places:
            prod *= hilbert_symbol(a, b, p)
        assert prod == 1, (a, b)


def test_hasse_product_formula():
    for g in (diag(1, 1, 3), a_perp(2), K_family(1), diag(2, 3, 5)):
        from ternclass.lattice import disc
        places = set(prime_factors(2 * disc(g)))
        prod = hasse_invariant(g, -1)
        for p in places:
            prod *= hasse_invariant(g, p)
        assert prod == 1


def test_jordan_odd():
    assert jordan_odd(diag(1, 1, 25), 5).case_id == 1
    assert jordan_odd(K_family(1), 7).exponents == (0, 0, 2)
    assert jordan_odd(diag(1, 5, 25), 5).case_id == 4


def test_hasse_and_genus():
    assert hasse_invariant(diag(1, 1, 3), 2) == -1
    assert not same_genus(diag(1, 1, 9), diag(1, 3, 3))
    assert same_genus(diag(1, 1, 3), diag(1, 1, 3))


def test_local_representation():
    assert not local_represents(a_perp(2), 2, 1)
    assert local_represents(diag(1, 1, 3), 3, 2)
    # 7 is not a sum of three squares
    assert not genus_represents(I3, 7)
    assert genus_represents(I3, 6)


def test_anisotropy():
    assert not is_anisotropic(I3, 5)
    assert is_anisotropic(diag(1, 1, 3), 3)
    assert is_anisotropic(I3, 2)
