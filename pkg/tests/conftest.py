import pytest

from viscoshock import PressureLaw, build_shock, compute_profile


@pytest.fixture(scope="session")
def law():
    return PressureLaw(gamma=2.0)


@pytest.fixture(scope="session")
def shock(law):
    return build_shock(1.2, 1.0, 0.0, law)


@pytest.fixture(scope="session")
def profile(shock, law):
    # workhorse profile shared by the cheaper tests
    return compute_profile(shock, 0.1, law, tol=1e-10, n=4001)


@pytest.fixture(scope="session")
def reference_profile(shock, law):
    # dense, tight-tolerance profile used as the exact solution when
    # measuring solver errors
    return compute_profile(shock, 0.1, law, tol=1e-12, n=20001)
