import pytest

from reachspe import demo_game
from reachspe.decide import Solver


@pytest.fixture(scope="session")
def demo():
    return demo_game()


@pytest.fixture(scope="session")
def demo_solver(demo):
    return Solver(demo)


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
