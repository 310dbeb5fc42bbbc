import cmath
import sys

import numpy as np
import pytest

from posmaps import BlockAlgebra

from oracles import TWO_PI_5


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def m2():
    return BlockAlgebra((2,))


@pytest.fixture
def lam5():
    return cmath.exp(1j * TWO_PI_5)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[n])
