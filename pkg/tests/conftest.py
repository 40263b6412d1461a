import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from ovalis.periods import load_periods_file  # noqa: E402

FIXTURE_DIR = Path(__file__).resolve().parent.parent / "src" / "ovalis" / "fixtures"
FIXTURE_NAMES = ("trott", "klein", "fermat4", "fermat5", "x9", "dividing")


def fixture_path(name: str) -> Path:
    return FIXTURE_DIR / f"{name}.json"


def load_fixture(name: str):
    return load_periods_file(fixture_path(name))


@pytest.fixture(scope="session")
def fixtures():
    return {name: load_fixture(name) for name in FIXTURE_NAMES}


# acceptance criteria report: test_acceptance.py records one line per criterion
ACCEPTANCE: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[n])
