import pytest

from ternclass import oracle
from ternclass.ascent import (FormulaOutOfContract, class_counts, class_number, gamma_sigma_count, propagate_labels,
                              q_transport, s_value, table1_w)
from ternclass.instances import random_instances, upward_instances
from ternclass.isometry import label, symmetries
from ternclass.lattice import I3, K2, K_family, diag, disc, scale
from ternclass.localdata import jordan_odd, legendre
from ternclass.verify import check_instance, k4_example_gram
from ternclass.watson import capital_lambda


def _nonresidue(p):
    return next(a for a in range(2, p) if legendre(a, p) == -1)


def test_fibre_size_examples():
    assert table1_w(jordan_odd(diag(1, 1, 25), 5)) == 15
    inst = next(i for i in upward_instances(5) if i.case_id == 3)
    assert table1_w(inst.jordan) == 1
    assert oracle.gamma_fiber(inst.n_gram, inst.l_gram, 5).size == 1


def test_fixed_points_case4_nonsquare():
    p = 7
    j = jordan_odd(diag(1, 7, 49), p)
    assert j.case_id == 4
    delta = _nonresidue(p)
    count, special = gamma_sigma_count(4, 2, delta * j.units[0], j)
    assert (count, special) == (j.eta_prime(1, 3), False)
    count, special = gamma_sigma_count(4, 2, j.units[0], j)
    assert (count, special) == (j.eta(1, 3) + 1, True)


def test_s_value_cubic_example():
    g = diag(1, 1, 49)
    n = capital_lambda(g, 7)
    assert n == scale(I3, 49)
    assert s_value([s.q for s in symmetries(n)], jordan_odd(g, 7)) == 9


def test_order16_counts():
    g = k4_example_gram(7)
    n = capital_lambda(g, 7)
    j = jordan_odd(g, 7)
    assert label(n).order == 16
    fc = class_counts(label(n), j, disc(n), l_gram=g)
    assert (fc.w, fc.f, fc.s) == (21, 17, 1)
    assert {k: fc.h.get(k, 0) for k in (16, 8, 4, 2)} == {16: 1, 8: 0, 4: 3, 2: 1}
    assert fc.classes == 5


def test_q_transport():
    assert q_transport(1, False, 7 * 49, 7) == 7
    assert q_transport(1, True, 7 * 49, 7) == 7 * 49
    assert q_transport(3, True, 2 * 49, 7) == 2
    with pytest.raises(FormulaOutOfContract):
        q_transport(3, True, 2 * 7, 7)


def test_family_labels_propagate():
    n = capital_lambda(K_family(2), 7)
    j = jordan_odd(K_family(2), 7)
    got = propagate_labels(label(n), j, disc(n), n_gram=n, l_gram=K_family(2))
    fib = oracle.gamma_fiber(n, K_family(2), 7)
    assert got == fib.labels()
    assert sum(k for lab, k in got.items() if lab.order == 4) >= 6


def test_appendix_case3_single_order24():
    inst = next(i for i in upward_instances(3) if label(i.n_gram).order == 24 and i.case_id == 3)
    fc = class_counts(label(inst.n_gram), inst.jordan, disc(inst.n_gram), l_gram=inst.l_gram)
    assert fc.h.get(24, 0) == 1


def test_appendix_shape_outside_contract():
    # an order-24 N = K2(a, b) at p = 3 whose 3-adic shape the closed forms do not cover
    n = scale(K2(9, 3), 3)
    with pytest.raises(FormulaOutOfContract):
        from ternclass.ascent import _appendix
        l_gram = next(m.gram for m in oracle.watson_preimages(n, 3))
        _appendix(label(n), disc(n), jordan_odd(l_gram, 3), l_gram)


def test_content_guard():
    with pytest.raises(FormulaOutOfContract):
        propagate_labels(label(scale(I3, 49)), jordan_odd(scale(diag(1, 1, 49), 7), 7), 49 ** 3)


@pytest.mark.parametrize("inst", random_instances(16, seed=3), ids=lambda i: f"case{i.case_id}-p{i.p}")
def test_random_instances(inst):
    ok, detail = check_instance(inst)
    assert ok, detail


def test_class_number_small():
    assert class_number(K_family(0))[0] == 1
    h, rep = class_number(diag(1, 1, 25))
    assert h == 2 and rep.labels == oracle.enumerate_genus(diag(1, 1, 25)).labels()
    assert class_number(I3)[0] == 1


def test_report_json_schema():
    h, rep = class_number(K_family(1))
    data = rep.to_json()
    assert data["schema"] == 1 and data["h"] == h == 5
    assert data["labels"] and all(row["label"]["order"] in (2, 4, 8, 12, 16, 24, 48) for row in data["labels"])
