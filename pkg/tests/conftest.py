import re

import hypothesis

# statistical helpers burn a few hundred ms per example on slow machines;
# the default 200ms deadline makes those tests flaky under load
hypothesis.settings.register_profile("ci", deadline=None, derandomize=True)
hypothesis.settings.load_profile("ci")

# one verdict line per acceptance criterion, printed after the run so the
# release gates are scannable without grepping the full pytest output
_CRITERION = re.compile(r"test_criterion_(\d+)")
_verdicts = {}


def pytest_runtest_logreport(report):
    m = _CRITERION.search(report.nodeid)
    if m is None:
        return
    num = int(m.group(1))
    if report.when == "call":
        _verdicts[num] = _verdicts.get(num, True) and report.passed
    elif report.failed:  # setup or teardown error counts as a failure
        _verdicts[num] = False


def pytest_terminal_summary(terminalreporter):
    if not _verdicts:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for num in sorted(_verdicts):
        verdict = "PASS" if _verdicts[num] else "FAIL"
        terminalreporter.write_line(f"criterion {num}: {verdict}")
