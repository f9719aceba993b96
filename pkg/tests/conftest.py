import pytest

_criteria = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion a test belongs to")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or rep.when not in ("setup", "call"):
        return
    number, title = marker.args
    entry = _criteria.setdefault(number, {"title": title, "failed": [], "ran": 0})
    if rep.failed:
        entry["failed"].append(item.name)
    if rep.when == "call":
        entry["ran"] += 1


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        e = _criteria[number]
        status = "FAIL" if e["failed"] else "PASS"
        line = f"criterion {number} {e['title']}: {status} ({e['ran']} checks)"
        if e["failed"]:
            line += " failing: " + ", ".join(e["failed"])
        terminalreporter.write_line(line)
