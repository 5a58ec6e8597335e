import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from eisenstein import kernel  # noqa: E402


@pytest.fixture(params=kernel.available_impls())
def impl(request):
    return request.param


def pytest_terminal_summary(terminalreporter):
    import helpers

    if helpers.ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(helpers.ACCEPTANCE_LINES, key=lambda l: int(l.split("criterion")[1].split(":")[0])):
            terminalreporter.write_line(line)
