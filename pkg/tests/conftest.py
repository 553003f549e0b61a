"""Prints one PASS/FAIL line per acceptance criterion at the end of the run."""

import pytest

_VERDICTS = {}


@pytest.hookimpl(wrapper=True)
def pytest_runtest_makereport(item, call):
    report = yield
    mark = item.get_closest_marker("acceptance")
    if mark is not None and (call.when == "call" or report.failed):
        key = (mark.args[0], mark.args[1])
        _VERDICTS[key] = _VERDICTS.get(key, True) and report.passed
    return report


def pytest_terminal_summary(terminalreporter):
    if not _VERDICTS:
        return
    terminalreporter.section("acceptance criteria")
    for (num, title), ok in sorted(_VERDICTS.items()):
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} {num:>2}. {title}")
