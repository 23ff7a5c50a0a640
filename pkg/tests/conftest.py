import os
import sys

sys.path.insert(0, os.path.dirname(__file__))

import pytest

_RESULTS = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, text): numbered acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or report.when == "teardown":
        return
    n, text = mark.args
    if report.failed or report.when == "call":
        prev = _RESULTS.get(n, (True, text))[0]
        _RESULTS[n] = (prev and not report.failed, text)


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_RESULTS):
        ok, text = _RESULTS[n]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} criterion {n}: {text}")
