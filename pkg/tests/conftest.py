import re
from collections import defaultdict

CRITERION = re.compile(r"test_criterion_(\d+)")
TITLES = {
    "1": "result rows within 0.03 of the published fits",
    "2": "objective <= 0.05 on every dataset",
    "3": "bias correction (Average MAE <= 0.02, zero mean, idempotent)",
    "4": "P(A) - P_t > 0 on every fitted dataset",
    "5": "numerical property suites",
    "6": "byte-identical reports from repeated fit runs",
}

_outcomes: dict[str, list[bool]] = defaultdict(list)


def pytest_runtest_logreport(report):
    match = CRITERION.search(report.nodeid)
    if not match:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _outcomes[match.group(1)].append(report.outcome == "passed")


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(_outcomes, key=int):
        results = _outcomes[key]
        status = "PASS" if all(results) else "FAIL"
        terminalreporter.write_line(
            f"criterion {key}: {status} ({sum(results)}/{len(results)} checks) {TITLES.get(key, '')}"
        )
