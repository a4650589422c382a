import warnings

import pytest

from pdsteady import NegativeAlbuminWarning, paper_parameters, solve_profiles

_criteria = {}


@pytest.fixture(scope="session")
def paper():
    return paper_parameters()


@pytest.fixture(scope="session")
def constant_solution(paper):
    return solve_profiles(paper, "constant-nu")


@pytest.fixture(scope="session")
def linear_solution(paper):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", NegativeAlbuminWarning)
        return solve_profiles(paper, "linear-nu")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    number, title = marker.args
    entry = _criteria.setdefault(number, {"title": title, "ok": True, "tests": 0})
    if report.when == "call":
        entry["tests"] += 1
    if report.failed:
        entry["ok"] = False


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        entry = _criteria[number]
        status = "PASS" if entry["ok"] and entry["tests"] else "FAIL"
        terminalreporter.write_line(f"criterion {number:>2}: {status}  {entry['title']}")
