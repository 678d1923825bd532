import pytest

from maxent import build_gauss_legendre


@pytest.fixture(scope="session")
def rule192():
    return build_gauss_legendre(192)


@pytest.fixture(scope="session")
def rule96():
    return build_gauss_legendre(96)


def pytest_terminal_summary(terminalreporter):
    from tests import acceptance_log

    if acceptance_log.LINES:
        terminalreporter.section("acceptance criteria")
        for line in acceptance_log.LINES:
            terminalreporter.write_line(line)
