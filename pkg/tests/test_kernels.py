import pytest

from ternclass import _pykernels, kernels
from ternclass.lattice import reduce

CASES = [(1, 1, 1, 0, 0, 0), (2, 2, 295, -1, -1, 0), (3, 3, 3, -1, -1, -1), (5, 7, 11, 2, -1, 3)]


def test_backend_selected():
    assert kernels.BACKEND in ("cython", "python")


@pytest.mark.skipif(kernels.BACKEND != "cython", reason="compiled core not built")
def test_backends_agree():
    from ternclass import _ckernels
    for a, b, c, f, e, h in CASES:
        for bound in (1, 10, 60):
            py = sorted(_pykernels.enum_vectors(a, b, c, f, e, h, bound, -50, 50))
            cy = sorted(_ckernels.enum_vectors(a, b, c, f, e, h, bound, -50, 50))
            assert py == cy
    for d in (1, 24, 105, 500):
        assert sorted(_pykernels.reduced_candidates(d)) == sorted(_ckernels.reduced_candidates(d))


def test_candidates_are_reduced():
    for d in (7, 48, 105):
        for six_ in kernels.reduced_candidates(d):
            a, b, c, f, e, h = six_
            g = ((a, h, e), (h, b, f), (e, f, c))
            assert reduce(g)[0][0][0] == a
