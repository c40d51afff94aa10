from __future__ import annotations

from pathlib import Path

import pytest

from kdiophantine import make_field, use_backend

DATA = Path(__file__).parent / "data"

_criteria: dict[int, tuple[str, list[str]]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion n")


@pytest.fixture(params=["numba", "numpy"])
def each_backend(request):
    with use_backend(request.param):
        yield request.param


@pytest.fixture(scope="session")
def field():
    cache = {}

    def get(p):
        if p not in cache:
            cache[p] = make_field(p)
        return cache[p]

    return get


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        n, title = marker.args
        _criteria.setdefault(n, (title, []))[1].append(rep.outcome)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_criteria):
        title, outcomes = _criteria[n]
        status = "PASS" if outcomes and all(o == "passed" for o in outcomes) else "FAIL"
        terminalreporter.write_line(f"AC{n:02d} {status}  {title}")
