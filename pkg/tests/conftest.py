import pytest
from hypothesis import HealthCheck, settings

from mcsc import compile_classical, compile_possibilistic, load_bundled, parse_mcs, parse_problem

settings.register_profile(
    "repo", derandomize=True, deadline=None, max_examples=60,
    suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("repo")


@pytest.fixture(scope="session")
def robots():
    return parse_problem(load_bundled("robots.json")).problem


@pytest.fixture(scope="session")
def robots_mcs(robots):
    return compile_classical(robots)


@pytest.fixture(scope="session")
def robots_pmcs(robots):
    return compile_possibilistic(robots)


@pytest.fixture(scope="session")
def example1():
    return parse_mcs(load_bundled("example1.mcs")).mcs


@pytest.fixture(scope="session")
def example2():
    return parse_mcs(load_bundled("example2.mcs")).mcs


@pytest.fixture(scope="session")
def example1_profb_text():
    """Example 1 with the extra fact profB in c2."""
    return load_bundled("example1.mcs").replace("profA.", "profA.\n    profB.")
