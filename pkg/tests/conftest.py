import pytest

from goldbach_sieve.primes import build_table

_ACCEPTANCE = []


@pytest.fixture(scope="session")
def table_1e4():
    return build_table(10_000)


@pytest.fixture(scope="session")
def table_1e5():
    return build_table(100_000)


@pytest.fixture(scope="session")
def acceptance_log():
    return _ACCEPTANCE


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for line in _ACCEPTANCE:
        terminalreporter.write_line(line)
