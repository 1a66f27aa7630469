import pytest

from webdirq import fixtures as F


@pytest.fixture
def detour():
    return F.build(F.detour())


@pytest.fixture
def loopback():
    return F.build(F.loopback())


@pytest.fixture
def fruit():
    return F.build(F.fruit())


def pytest_terminal_summary(terminalreporter):
    import sys

    module = sys.modules.get("test_acceptance")
    if module is None or not module.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(module.RESULTS, key=lambda l: int(l.split()[0][2:])):
        terminalreporter.write_line(line)
