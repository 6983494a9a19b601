import pytest
from hypothesis import settings

from eulerob import examples as ex

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@pytest.fixture
def node():
    return ex.node()


@pytest.fixture
def cusp():
    return ex.cusp()


@pytest.fixture
def umbrella():
    return ex.whitney_umbrella(ex.UMBRELLA_SECTION_CHI)


@pytest.fixture
def smooth():
    return ex.smooth_germ(1)


@pytest.fixture(params=sorted(ex.CATALOG))
def curated(request):
    return ex.CATALOG[request.param]


def pytest_terminal_summary(terminalreporter):
    from tests import test_acceptance

    if not test_acceptance.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n, title, ok, detail in sorted(test_acceptance.RESULTS):
        terminalreporter.write_line(test_acceptance._line(n, title, ok, detail))
