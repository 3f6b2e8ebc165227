import pytest

_results = []


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("acceptance")
    if mark is None or rep.when != "call":
        return
    ident, title = mark.args
    extra = dict(rep.user_properties).get("runtime")
    _results.append((ident, title, rep.outcome, extra or f"{rep.duration:.2f} s"))


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for ident, title, outcome, dur in sorted(_results, key=lambda r: int(r[0])):
        status = "PASS" if outcome == "passed" else "FAIL"
        tr.write_line(f"[{status}] {ident}. {title} ({dur})")
    failed = sum(1 for r in _results if r[2] != "passed")
    tr.write_line(f"{len(_results) - failed}/{len(_results)} criteria passed")
