import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

ACCEPTANCE_LINES: dict[str, str] = {}


@pytest.fixture
def acceptance_line():
    """Record one summary line per acceptance criterion."""

    def record(key: str, passed: bool, text: str) -> None:
        line = f"{key} {'PASS' if passed else 'FAIL'}: {text}"
        ACCEPTANCE_LINES[key] = line
        print(line)

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES, key=lambda k: int(k[2:])):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])
