"""Collects acceptance verdict lines and replays them after the run."""

import pytest

_verdicts = []


@pytest.fixture
def verdict():
    def record(line):
        _verdicts.append(line)
        print(line)

    return record


def pytest_terminal_summary(terminalreporter):
    if not _verdicts:
        return
    terminalreporter.section("acceptance criteria")
    for line in _verdicts:
        terminalreporter.write_line(line)
