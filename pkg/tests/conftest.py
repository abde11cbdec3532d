import pytest

from arccount.plane_geometry import plane_for_order

# One line per acceptance criterion, emitted after the run so the verdicts
# survive pytest's output capture.
ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def acceptance_recorder():
    return ACCEPTANCE_LINES.append


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def plane3():
    return plane_for_order(3)


@pytest.fixture(scope="session")
def plane5():
    return plane_for_order(5)


@pytest.fixture(scope="session")
def plane7():
    return plane_for_order(7)
