import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from translid.tokenizer import italian_patterns  # noqa: E402

DATA = Path(__file__).parent / "data"
PATTERN_FILE = Path(__file__).parents[1] / "src" / "translid" / "data" / "italian.pat"

# filled by test_acceptance, printed at the end of the run
ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def patterns():
    return italian_patterns()


@pytest.fixture(scope="session")
def pattern_file():
    return PATTERN_FILE


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
