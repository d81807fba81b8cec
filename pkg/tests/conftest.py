import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

import pytest

_acceptance = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(n, description): numbered acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("acceptance")
    if mark is None or (report.when != "call" and report.passed):
        return
    n, description = mark.args
    ok, _ = _acceptance.get(n, (True, description))
    _acceptance[n] = (ok and report.passed, description)


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_acceptance):
        ok, description = _acceptance[n]
        terminalreporter.write_line(f"AC{n} {'PASS' if ok else 'FAIL'}: {description}")
