import pytest

from vandercond import ctx_new


@pytest.fixture(scope="session")
def ctx128():
    return ctx_new(128)


@pytest.fixture(scope="session")
def ctx192():
    return ctx_new(192)


@pytest.fixture(scope="session")
def ctx256():
    return ctx_new(256)
