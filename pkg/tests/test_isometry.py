from ternclass.isometry import (Label, cubic_type, label, orthogonal_group, orthogonal_systems, recognize_family,
                                symmetries)
from ternclass.lattice import A3, I3, J3, K1, K2, K3, diag, scale
from ternclass.linalg import congruent


def test_group_orders():
    assert label(I3).order == 48
    assert label(K1(1, 3)).order == 12
    assert label(K3(1, 3)).order == 16


def test_group_elements_are_automorphisms():
    for g in (I3, A3, K3(1, 3), diag(1, 2, 5)):
        grp = orthogonal_group(g)
        assert all(congruent(g, m) == g for m in grp)
        assert len(grp) == label(g).order


def test_k2_label_shape():
    # b > 6a: labels 2a three times, 6a three times, then b
    for a, b in ((1, 7), (2, 13), (1, 11)):
        assert label(K2(a, b)) == Label(24, (2 * a,) * 3 + (6 * a,) * 3 + (b,))


def test_label_q_values_match_symmetries():
    for g in (I3, K3(1, 3), diag(1, 2, 5)):
        assert sorted(s.q for s in symmetries(g)) == list(label(g).q_values)


def test_orthogonal_systems():
    assert len(orthogonal_systems(K2(1, 7))) == 3
    assert len(orthogonal_systems(K3(1, 3))) == 2
    assert len(orthogonal_systems(I3)) == 4


def test_recognize_family():
    assert recognize_family(J3) == ("K4", (2, 3))
    assert recognize_family(I3) == ("K3", (1, 1))
    assert recognize_family(diag(1, 2, 5)) is None


def test_cubic_type():
    assert cubic_type(scale(I3, 7)) == ("I", 7)
    assert cubic_type(A3)[0] == "A"
    assert cubic_type(J3)[0] == "J"
    assert cubic_type(K3(1, 3)) is None
