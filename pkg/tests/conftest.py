import pytest

from tentconj.plmap import PLFunction, PLMap
from fractions import Fraction as F


@pytest.fixture
def nonconvex_left():
    return PLFunction([(0, 0), (F(1, 4), F(1, 2)), (F(1, 2), F(5, 8)), (F(5, 8), 1)])


@pytest.fixture
def nonconvex_full():
    return PLMap([
        (0, 0), (F(1, 4), F(1, 2)), (F(1, 2), F(5, 8)), (F(5, 8), 1),
        (F(13, 16), F(5, 8)), (F(29, 32), F(1, 2)), (1, 0),
    ])


_ACCEPTANCE = []


def record_acceptance(number, title, passed, detail=""):
    _ACCEPTANCE.append((number, title, passed, detail))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, passed, detail in sorted(_ACCEPTANCE):
        status = "PASS" if passed else "FAIL"
        line = f"[{status}] criterion {number:2d}: {title}"
        if detail:
            line += f" ({detail})"
        terminalreporter.write_line(line)
