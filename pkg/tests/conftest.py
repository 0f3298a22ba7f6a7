import pytest

from smplite.rule_catalog import load_fixtures

FIXTURES = load_fixtures()


def pytest_generate_tests(metafunc):
    if "fixture_case" in metafunc.fixturenames:
        metafunc.parametrize("fixture_case", FIXTURES, ids=[f.id for f in FIXTURES])


@pytest.fixture(scope="session")
def fixtures():
    return FIXTURES


_LOG = pytest.StashKey[list]()


@pytest.fixture
def acceptance_log(request):
    return request.config.stash.setdefault(_LOG, [])


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    log = config.stash.get(_LOG, [])
    if not log:
        return
    terminalreporter.section("acceptance criteria")
    for _, text in sorted(log):
        terminalreporter.write_line(text)
