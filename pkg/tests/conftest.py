import pytest
from hypothesis import settings

from shapovalov.liealg import AlgebraId, build_algebra

settings.register_profile("repo", max_examples=60, deadline=None)
settings.load_profile("repo")


@pytest.fixture(scope="session")
def algebra():
    cache = {}

    def get(family, k, band=None):
        key = (family, k, band)
        if key not in cache:
            cache[key] = build_algebra(AlgebraId(family, k, band))
        return cache[key]

    return get


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[n])
