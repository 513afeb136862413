import pytest

from polyu.escalation import full_catalogue


@pytest.fixture(scope="session")
def small_catalogue():
    return full_catalogue(10_000)


@pytest.fixture(scope="session")
def catalogue():
    return full_catalogue(100_000, workers="auto")


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[n])
