import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

_CRITERIA: dict = {}
_RESULTS: dict = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion covered by the test")


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("criterion")
        if mark is not None:
            _CRITERIA[item.nodeid] = (mark.args[0], mark.args[1])


def pytest_runtest_logreport(report):
    crit = _CRITERIA.get(report.nodeid)
    if crit is None:
        return
    ok = _RESULTS.setdefault(crit, True)
    if report.failed or (report.when == "call" and report.skipped):
        _RESULTS[crit] = False
    elif report.when == "call":
        _RESULTS[crit] = ok and report.passed


@pytest.hookimpl(trylast=True)
def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for (num, title), ok in sorted(_RESULTS.items()):
        terminalreporter.write_line(f"criterion {num:>2}: {'PASS' if ok else 'FAIL'}  {title}")
