import re

import pytest

from qslab import exact

_CRITERIA: dict[int, list[bool]] = {}
_TITLES: dict[int, str] = {}


@pytest.fixture(scope="session")
def cache():
    return exact.default_cache()


def pytest_runtest_logreport(report):
    m = re.search(r"test_acceptance\.py::test_criterion_(\d+)_(\w+)", report.nodeid)
    if not m:
        return
    if report.when == "call" or (report.when == "setup" and report.failed):
        k = int(m.group(1))
        _TITLES.setdefault(k, m.group(2).replace("_", " "))
        _CRITERIA.setdefault(k, []).append(report.passed)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(_CRITERIA):
        status = "PASS" if all(_CRITERIA[k]) else "FAIL"
        terminalreporter.write_line(f"criterion {k}: {status}  {_TITLES[k]}")
