from pathlib import Path

import pytest

INSTANCES = Path(__file__).resolve().parent.parent / "instances"


@pytest.fixture
def instances() -> Path:
    return INSTANCES


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(RESULTS):
        terminalreporter.write_line(RESULTS[k].line())
