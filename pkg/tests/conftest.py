import pytest

from sigembed import NumericConfig


@pytest.fixture(scope="session")
def cfg():
    return NumericConfig()
