import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

import pytest

from nbprover.corpus import load_problem

DATA = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def soundness_problems():
    return [load_problem(p) for p in sorted((DATA / "soundness").glob("*.p"))]


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    verdicts = getattr(mod, "VERDICTS", None)
    if not verdicts:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(verdicts):
        title, verdict = verdicts[number]
        terminalreporter.write_line(f"{verdict} criterion {number}: {title}")
