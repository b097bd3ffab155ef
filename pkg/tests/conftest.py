import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from qrot import weingarten  # noqa: E402

_acceptance: list[tuple[str, str]] = []


@pytest.fixture(autouse=True)
def _no_disk_cache():
    weingarten.set_cache_dir(None)
    yield
    weingarten.set_cache_dir(None)


def pytest_runtest_logreport(report):
    if "test_acceptance.py" in report.nodeid and report.when == "call":
        _acceptance.append((report.nodeid.split("::")[-1], report.outcome.upper()))
    elif "test_acceptance.py" in report.nodeid and report.when == "setup" and report.outcome != "passed":
        _acceptance.append((report.nodeid.split("::")[-1], report.outcome.upper()))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in _acceptance:
        terminalreporter.write_line(f"{outcome:7s} {name}")
