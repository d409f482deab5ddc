import pytest

from zforge.construction import build

ACCEPTANCE_CONFIGS = [(2, 2, 5), (2, 2, 7), (2, 3, 5), (2, 4, 7), (3, 4, 7), (3, 4, 11)]


@pytest.fixture(scope="session")
def acceptance_builds():
    return {cfg: build(*cfg, variant="graph", seed=1) for cfg in ACCEPTANCE_CONFIGS}


# one line per acceptance criterion, filled in by tests/test_acceptance.py
ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[num])
