import random

import pytest

from ternclass.lattice import A3, diag


def a_perp(b):
    """The root plane A2 orthogonal to <b>."""
    return ((2, 1, 0), (1, 2, 0), (0, 0, b))


@pytest.fixture
def rng():
    return random.Random(12345)


ISO_113 = diag(1, 1, 3)
A3_ = A3


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[n])
