import pytest

from cmtilt.linalg import Field


@pytest.fixture(params=["F2", "Q"])
def field(request):
    return Field.parse(request.param)


@pytest.fixture
def F2():
    return Field(2)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
