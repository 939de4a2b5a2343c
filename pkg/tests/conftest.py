import random

import pytest

from mcdeform.artin import dual_numbers, truncated_polynomial
from mcdeform.zoo import abelian_line, heisenberg, obstructed_dgla, zoo


@pytest.fixture
def rng():
    return random.Random(20240611)


@pytest.fixture(scope="session")
def lobs():
    return obstructed_dgla()


@pytest.fixture(scope="session")
def labh1():
    return abelian_line(1)


@pytest.fixture(scope="session")
def heis():
    return heisenberg()


@pytest.fixture(scope="session")
def test_zoo():
    return zoo()


@pytest.fixture(scope="session")
def coefficient_algebras():
    return [truncated_polynomial(3), truncated_polynomial(4), dual_numbers(0), dual_numbers(1)]


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for k in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[k])
