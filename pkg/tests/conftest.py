"""Shared fixtures and the acceptance summary printed at the end of a run."""
import pytest

from refpoint import ExplicitInstance

ACCEPTANCE_RESULTS: dict = {}


@pytest.fixture
def routes():
    return ExplicitInstance([(10, 1), (6, 6), (1, 10)])


@pytest.fixture
def acceptance(request):
    """Record one pass/fail line per acceptance criterion.

    Usage: ``acceptance(number, title)``; the outcome is taken from the test.
    """

    def register(number: int, title: str):
        request.node._acceptance = (number, title)

    return register


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    tag = getattr(item, "_acceptance", None)
    if tag is None or rep.when != "call" and not (rep.when == "setup" and rep.failed):
        return
    number, title = tag
    prev = ACCEPTANCE_RESULTS.get(number, (title, True, []))
    ACCEPTANCE_RESULTS[number] = (title, prev[1] and rep.passed, prev[2] + [item.name])


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE_RESULTS):
        title, ok, tests = ACCEPTANCE_RESULTS[number]
        terminalreporter.write_line(f"criterion {number}: {'PASS' if ok else 'FAIL'}  {title}  ({len(tests)} tests)")
