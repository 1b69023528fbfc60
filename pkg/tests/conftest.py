import pytest

from ktoric.fixtures import FIXTURES, load_fixture


@pytest.fixture(params=FIXTURES)
def any_fixture(request):
    return load_fixture(request.param)


@pytest.fixture(params=[f for f in FIXTURES if f != "nonsmooth"])
def delzant(request):
    return load_fixture(request.param)


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[n])
