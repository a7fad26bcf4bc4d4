import pytest

from bairekit.language import empty_language, full_language, parity_language


@pytest.fixture(scope="session")
def empty():
    return empty_language()


@pytest.fixture(scope="session")
def full():
    return full_language()


@pytest.fixture(scope="session")
def parity():
    return parity_language()
