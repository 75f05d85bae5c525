from __future__ import annotations

import pytest

from loopcoh.spaces import builtin


@pytest.fixture(scope="session")
def module_for():
    cache = {}

    def get(name: str, p: int, max_degree: int = 24):
        key = (name, p, max_degree)
        if key not in cache:
            cache[key] = builtin(name, (0, 2, 3, 5, 7), max_degree).thom_module(p)
        return cache[key]

    return get


_CRITERIA: dict[int, tuple[str, bool]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


def pytest_runtest_logreport(report):
    marker = getattr(report, "criterion", None)
    if marker is None:
        return
    number, title = marker
    ok = _CRITERIA.get(number, (title, True))[1]
    if report.when == "call" or report.failed:
        ok = ok and report.passed
    _CRITERIA[number] = (title, ok)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    m = item.get_closest_marker("criterion")
    if m is not None:
        outcome.get_result().criterion = m.args


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        title, ok = _CRITERIA[number]
        terminalreporter.write_line(f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {title}")
