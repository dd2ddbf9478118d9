import pytest

from snakestab import abs_model, arithmetic_measure, germ_model, make_measure, piecewise_linear
from snakestab.funcmodel import Term


@pytest.fixture
def vee():
    return abs_model()


@pytest.fixture
def w37():
    return make_measure([(-1.0, 0.3), (1.0, 0.7)])


@pytest.fixture
def arith():
    return arithmetic_measure()


@pytest.fixture
def zigzag():
    return piecewise_linear([0.0, 1.0, 2.0], [-1.0, 2.0, -3.0, 4.0])


@pytest.fixture
def parabola():
    return germ_model([Term(1.0, 2.0)], [Term(1.0, 2.0)])


@pytest.fixture
def sqrt_cusp():
    """sqrt(-x) on the left, x on the right."""
    return germ_model([Term(1.0, 0.5)], [Term(1.0, 1.0)])


def pytest_terminal_summary(terminalreporter):
    from . import test_acceptance

    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in test_acceptance.RESULTS:
            terminalreporter.write_line(line)
