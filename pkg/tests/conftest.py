"""Collects outcomes of tests marked ``criterion`` and prints one line per
acceptance criterion at the end of the session."""
from collections import defaultdict

import pytest

_runs = defaultdict(list)  # n -> [(nodeid, passed, seconds)]
_meta = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or rep.when != "call":
        return
    n, title = mark.args[:2]
    _meta[n] = (title, mark.kwargs.get("budget"))
    _runs[n].append((item.nodeid, rep.passed, rep.duration))


def pytest_terminal_summary(terminalreporter):
    if not _runs:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for n in sorted(_runs):
        title, budget = _meta[n]
        runs = _runs[n]
        passed = sum(ok for _, ok, _ in runs)
        seconds = sum(t for _, _, t in runs)
        over = budget is not None and seconds > budget
        ok = passed == len(runs) and not over
        detail = f"{passed}/{len(runs)} checks, {seconds:.1f} s"
        if budget is not None:
            detail += f" of {budget:g} s budget" + (" EXCEEDED" if over else "")
        tr.write_line(f"criterion {n} {'PASS' if ok else 'FAIL'}: {title} ({detail})")
        for nodeid, good, _ in runs:
            if not good:
                tr.write_line(f"    failed: {nodeid}")
