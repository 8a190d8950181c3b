import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from oracle import PHI  # noqa: E402

from circumbilliard.billiard import BilliardShape  # noqa: E402


@pytest.fixture(params=[1.5, PHI], ids=["a1.5", "phi"])
def shape(request):
    return BilliardShape(request.param, 1.0)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
