"""Acceptance bookkeeping: tests marked ``criterion(n, name)`` are grouped and
summarized as one PASS/FAIL line per criterion at the end of the run."""

import pytest

_CRITERIA: dict[int, dict] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, name): acceptance criterion this test belongs to")


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("criterion")
        if mark is not None:
            number, name = mark.args
            _CRITERIA.setdefault(number, {"name": name, "failed": [], "ran": 0})


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or report.when not in ("setup", "call"):
        return
    entry = _CRITERIA[mark.args[0]]
    if report.when == "call":
        entry["ran"] += 1
    if report.failed:
        entry["failed"].append(item.name)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        entry = _CRITERIA[number]
        if entry["failed"]:
            status = "FAIL"
        elif entry["ran"]:
            status = "PASS"
        else:
            status = "NOT RUN"
        line = f"criterion {number}: {status}  {entry['name']}"
        if entry["failed"]:
            line += f"  (failing: {', '.join(entry['failed'])})"
        terminalreporter.write_line(line)
