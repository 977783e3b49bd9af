import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from thu.catalog import theory_u  # noqa: E402

CORPUS = os.path.join(os.path.dirname(__file__), "corpus")


@pytest.fixture(scope="session")
def U():
    return theory_u()


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "LINES", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
