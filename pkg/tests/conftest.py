import re

_CRITERION = re.compile(r"test_acceptance\.py::test_criterion_(\d+)_(\w+)")
_results: dict[tuple[int, str], bool] = {}


def pytest_runtest_logreport(report):
    m = _CRITERION.search(report.nodeid)
    if not m:
        return
    key = (int(m.group(1)), m.group(2))
    if report.failed:
        _results[key] = False
    elif report.when == "call":
        _results.setdefault(key, report.passed)


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for (n, name), ok in sorted(_results.items()):
        terminalreporter.write_line(f"ACCEPTANCE {n:2d} {name}: {'PASS' if ok else 'FAIL'}")
