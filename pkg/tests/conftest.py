from fractions import Fraction

import pytest

from ncsolenoid.exact import SplitScalar

ALPHA = SplitScalar(Fraction(1, 3), Fraction(5, 2))


@pytest.fixture
def alpha():
    return ALPHA


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
