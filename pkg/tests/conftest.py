from __future__ import annotations

import pytest

_CRITERIA: dict[int, dict] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion covered by the test")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    number, title = marker.args
    entry = _CRITERIA.setdefault(number, {"title": title, "ok": True, "seen": False, "notes": []})
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        entry["seen"] = True
        if not rep.passed or hasattr(rep, "wasxfail"):
            entry["ok"] = False
            reason = getattr(rep, "wasxfail", "") or rep.longreprtext.strip().splitlines()[-1:]
            entry["notes"].append(reason if isinstance(reason, str) else " ".join(reason))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        entry = _CRITERIA[number]
        if not entry["seen"]:
            continue
        status = "PASS" if entry["ok"] else "FAIL"
        line = f"{status} criterion {number}: {entry['title']}"
        if entry["notes"]:
            line += f" ({entry['notes'][0]})"
        terminalreporter.write_line(line)
