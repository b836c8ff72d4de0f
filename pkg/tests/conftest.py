import sys

import pytest

from rhverify.ival import precision


@pytest.fixture
def prec256():
    with precision(256):
        yield 256


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
